#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "affasym/affine.hpp"
#include "affasym/bde.hpp"
#include "affasym/trace.hpp"

using namespace affasym;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Trace, Circle) {
  const auto lines = trace_zero_set([](double u, double v) { return u * u + v * v - 0.25; }, {-1, 1, -1, 1}, 64, 64);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_TRUE(lines[0].closed);
  for (const Point2& p : lines[0].pts) EXPECT_NEAR(std::hypot(p[0], p[1]), 0.5, 1e-9);
}

TEST(Trace, Parabola) {
  const BdeField f = folded_model_field(0.5);
  const auto lines = trace_zero_set([&](double u, double v) { return discriminant(f, u, v); }, {-1, 1, -1, 1}, 50, 50);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_FALSE(lines[0].closed);
  for (const Point2& p : lines[0].pts) EXPECT_NEAR(p[1], 0.5 * p[0] * p[0], 1e-9);
}

TEST(Trace, TorusParabolicCircles) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  auto K = [&](double u, double v) { return euclidean_data(eval_surface_jets<2>(t, u, v)).K; };
  const auto lines = trace_zero_set(K, {0.01, 2 * kPi - 0.01, -1, 1}, 128, 16);
  ASSERT_EQ(lines.size(), 2u);
  const double centers[2] = {kPi / 2, 3 * kPi / 2};
  for (int k = 0; k < 2; ++k) {
    for (const Point2& p : lines[k].pts) EXPECT_NEAR(p[0], centers[k], 1e-6);
  }
}

TEST(Trace, TorusAffineParabolicCircles) {
  const auto lbar = [](double u, double) { return torus_extended_bde(2.0, 1.0, u)[0]; };
  const auto lines = trace_zero_set(lbar, {0.0, 2 * kPi, -1, 1}, 256, 8);
  EXPECT_EQ(lines.size(), 4u);
}

TEST(Trace, MorseIsolatedPoint) {
  const BdeField f = morse_model_field(1);
  const auto lines = trace_zero_set([&](double u, double v) { return discriminant(f, u, v); }, {-1, 1, -1, 1}, 33, 33);
  EXPECT_TRUE(lines.empty());
}

TEST(Trace, SaddleAndExactZeros) {
  // u v = 0 crosses grid nodes exactly; nudging keeps the output well formed
  const auto lines = trace_zero_set([](double u, double v) { return u * v; }, {-1, 1, -1, 1}, 10, 10);
  EXPECT_FALSE(lines.empty());
  for (const auto& l : lines) {
    for (const Point2& p : l.pts) EXPECT_LT(std::min(std::abs(p[0]), std::abs(p[1])), 1e-9);
  }
}

TEST(Trace, NonFiniteCellsSkipped) {
  const auto lines = trace_zero_set([](double u, double v) { return u < -0.5 ? std::nan("") : u - v; }, {-1, 1, -1, 1}, 20, 20);
  ASSERT_EQ(lines.size(), 1u);
  for (const Point2& p : lines[0].pts) EXPECT_GE(p[0], -0.5 - 0.1);
}

TEST(Trace, CsvAndSvg) {
  const auto lines = trace_zero_set([](double u, double v) { return u * u + v * v - 0.25; }, {-1, 1, -1, 1}, 8, 8);
  const std::string csv = polylines_to_csv(lines);
  EXPECT_EQ(csv.rfind("u,v\n", 0), 0u);
  const std::string path = polyline_path_data(lines[0], [](const Point2& p) { return p; });
  EXPECT_EQ(path[0], 'M');
  EXPECT_EQ(path.substr(path.size() - 1), "Z");
}

TEST(Trace, Deterministic) {
  auto f = [](double u, double v) { return std::sin(3 * u) * std::cos(2 * v) - 0.1; };
  const auto a = trace_zero_set(f, {-2, 2, -2, 2}, 90, 70);
  const auto b = trace_zero_set(f, {-2, 2, -2, 2}, 90, 70);
  EXPECT_EQ(polylines_to_csv(a), polylines_to_csv(b));
}
