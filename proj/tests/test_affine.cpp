#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "affasym/affine.hpp"

using namespace affasym;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_residual(const Vec3<double>& a, const Vec3<double>& b) {
  // |a - t b| / |a| with t the least-squares factor
  const double t = dot(a, b) / dot(b, b);
  return norm(a - scale(t, b)) / norm(a);
}

}  // namespace

TEST(Affine, TorusEuclidean) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  const AffinePointData d = euclidean_data(eval_surface_jets(t, 0.0, 0.0));
  EXPECT_NEAR(d.K, 0.25, 1e-14);
  EXPECT_EQ(d.euclid_class, CurvatureClass::elliptic);
  const AffinePointData p = euclidean_data(eval_surface_jets(t, kPi / 2, 0.0));
  EXPECT_NEAR(p.K, 0.0, 1e-14);
  EXPECT_EQ(p.euclid_class, CurvatureClass::parabolic);
  for (double u : {0.4, 2.0, 4.0}) {
    const AffinePointData q = euclidean_data(eval_surface_jets(t, u, 1.1));
    EXPECT_NEAR(q.K, std::cos(u) / (1.0 * (3.0 + std::cos(u))), 1e-13);
  }
}

TEST(Affine, QuadricFrame) {
  const AffinePointData d = blaschke_conormal_frame(pick_surface({.epsilon = 1}), 0.0, 0.0);
  EXPECT_NEAR(d.Ldet, 1.0, 1e-15);
  EXPECT_NEAR(d.Ndet, 1.0, 1e-15);
  EXPECT_NEAR(d.Mdet, 0.0, 1e-15);
  EXPECT_NEAR(d.K, 1.0, 1e-15);
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(d.nu[c], c == 2 ? 1.0 : 0.0, 1e-15);
    EXPECT_NEAR(d.xi[c], c == 2 ? 1.0 : 0.0, 1e-15);
  }
  EXPECT_NEAR(d.l, 0.0, 1e-15);
  EXPECT_NEAR(d.m, 0.0, 1e-15);
  EXPECT_NEAR(d.n, 0.0, 1e-15);
  EXPECT_EQ(affine_normal_curvature(d, 1.0, 0.3), 0.0);
}

TEST(Affine, TorusConormalAtOrigin) {
  const AffinePointData d = blaschke_conormal_frame(torus_surface({3.0, 1.0}), 0.0, 0.0);
  EXPECT_NEAR(norm(d.nu), std::pow(4.0, 0.25), 1e-13);
  EXPECT_NEAR(d.nu[0] / norm(d.nu), -1.0, 1e-14);
}

TEST(Affine, FrameRelationsOnRandomTorusPoints) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(0.0, 2 * kPi);
  int count = 0;
  while (count < 100) {
    const double u = d(rng), v = d(rng);
    if (std::abs(std::cos(u)) < 0.05) continue;
    ++count;
    const AffinePointData a = blaschke_conormal_frame(t, u, v);
    EXPECT_NEAR(dot(a.nu, a.xi), 1.0, 1e-8);
    EXPECT_NEAR(dot(a.xi, a.nu_u), 0.0, 1e-8);
    EXPECT_NEAR(dot(a.xi, a.nu_v), 0.0, 1e-8);
    const double s = std::abs(a.l) + std::abs(a.m) + std::abs(a.n) + 1.0;
    EXPECT_NEAR(-a.l, a.b11 * a.g11 + a.b21 * a.g12, 1e-8 * s);
    EXPECT_NEAR(-a.m, a.b11 * a.g12 + a.b21 * a.g22, 1e-8 * s);
    EXPECT_NEAR(-a.m, a.b12 * a.g11 + a.b22 * a.g12, 1e-8 * s);
    EXPECT_NEAR(-a.n, a.b12 * a.g12 + a.b22 * a.g22, 1e-8 * s);
    const double gdet = a.g11 * a.g22 - a.g12 * a.g12;
    EXPECT_NEAR(a.K_aff, (a.l * a.n - a.m * a.m) / gdet, 1e-8 * s * s);
  }
}

TEST(Affine, LemmaThirdFormEqualsShapeOperator) {
  PickParams p{.epsilon = -1, .sigma = 0.6};
  p.q = {{{4, 0}, 0.7}, {{3, 1}, -0.4}, {{2, 2}, 0.3}, {{1, 3}, 0.2}, {{0, 4}, -0.9}, {{5, 0}, 0.5}};
  const SurfaceDef s = pick_surface(p);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  for (int t = 0; t < 50; ++t) {
    const AffinePointData a = blaschke_conormal_frame(s, d(rng), d(rng));
    const double wa = d(rng), wb = d(rng);
    // D xi . w = (b11 wa + b12 wb) a_u + (b21 wa + b22 wb) a_v
    const double xa = a.b11 * wa + a.b12 * wb, xb = a.b21 * wa + a.b22 * wb;
    const double iaff = a.g11 * wa * xa + a.g12 * (wa * xb + wb * xa) + a.g22 * wb * xb;
    const double iii = a.l * wa * wa + 2 * a.m * wa * wb + a.n * wb * wb;
    EXPECT_NEAR(iii, -iaff, 1e-7);
  }
}

TEST(Affine, PickConstantTerms) {
  PickParams p{.epsilon = 1, .sigma = 1.0};
  p.q = {{{4, 0}, 2.0}, {{2, 2}, 2.0}};
  const AffinePointData a = blaschke_conormal_frame(pick_surface(p), 0.0, 0.0);
  EXPECT_NEAR(a.l, 0.5, 1e-12);
  PickParams q{.epsilon = 1, .sigma = 0.0};
  q.q = {{{3, 1}, 4.0}};
  EXPECT_NEAR(blaschke_conormal_frame(pick_surface(q), 0.0, 0.0).m, 1.0, 1e-12);
}

TEST(Affine, FlatAffineUmbilicConditions) {
  for (int eps : {1, -1}) {
    const double sigma = 0.7, q40 = 0.4, q13 = -0.3;
    PickParams p{.epsilon = eps, .sigma = sigma};
    p.q = {{{4, 0}, q40}, {{0, 4}, q40}, {{1, 3}, q13}, {{3, 1}, -eps * q13},
           {{2, 2}, -eps * (-2 * sigma * sigma + q40)}, {{5, 0}, 0.3}};
    const AffinePointData a = blaschke_conormal_frame(pick_surface(p), 0.0, 0.0);
    EXPECT_NEAR(a.l, 0.0, 1e-12);
    EXPECT_NEAR(a.m, 0.0, 1e-12);
    EXPECT_NEAR(a.n, 0.0, 1e-12);
  }
}

TEST(Affine, ClosedFormAgreesWithPipeline) {
  PickParams p{.epsilon = 1, .sigma = 1.0};
  p.q = {{{4, 0}, 1.0}};
  const SurfaceDef s = pick_surface(p);
  const AffinePointData a = blaschke_conormal_frame(s, 0.1, 0.2);
  const Vec3<double> c = monge_lmn_closed_form(height_jet(s, 0.1, 0.2));
  EXPECT_NEAR(c[0], a.l, 1e-8 * std::abs(a.l));
  EXPECT_NEAR(c[1], a.m, 1e-8 * std::abs(a.m));
  EXPECT_NEAR(c[2], a.n, 1e-8 * std::abs(a.n));

  const Vec3<double> z = monge_lmn_closed_form(height_jet(monge_surface("(u^2 - v^2)/2"), 0.3, -0.4));
  EXPECT_EQ(norm(z), 0.0);
}

TEST(Affine, TorusAsLocalGraph) {
  // Torus(2,1) near u = 0.3, v = 0 written as x = f(y, z)
  const double R = 2.0, r = 1.0, u0 = 0.3;
  const SurfaceDef g = parametric_surface("sqrt((2 + sqrt(1 - v^2))^2 - u^2)", "u", "v");
  const SurfaceDef t = torus_surface({R, r});
  const AffinePointData a = blaschke_conormal_frame(t, u0, 0.0);
  const AffinePointData b = blaschke_conormal_frame(g, 0.0, r * std::sin(u0));
  // Same point of space and same conormal/affine normal up to reparametrization
  EXPECT_NEAR(norm(a.alpha - b.alpha), 0.0, 1e-12);
  const double s = dot(a.nu, b.nu) > 0 ? 1.0 : -1.0;
  EXPECT_NEAR(norm(a.nu - scale(s, b.nu)), 0.0, 1e-7);
  EXPECT_NEAR(norm(a.xi - scale(s, b.xi)), 0.0, 1e-7);
  EXPECT_NEAR(a.K_aff, b.K_aff, 1e-7);
}

TEST(Affine, CuspGaussAnchor) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    const double q21 = d(rng), q40 = d(rng);
    const SurfaceDef s = cusp_gauss_surface({.q = {{{2, 1}, q21}, {{4, 0}, q40}, {{0, 3}, d(rng)}, {{3, 1}, d(rng)}}});
    const Vec3<double> c = extended_bde_values(height_jet(s, 0.0, 0.0));
    EXPECT_EQ(c[0], 0.0);
    EXPECT_EQ(c[1], 0.0);
    EXPECT_NEAR(c[2], -48 * q21 * q21, 1e-12 * 48 * q21 * q21);
  }
}

TEST(Affine, ExtendedProportionalToThirdForm) {
  PickParams p{.epsilon = -1, .sigma = 0.4};
  p.q = {{{4, 0}, 1.0}, {{2, 2}, -0.5}, {{1, 3}, 0.3}};
  const SurfaceDef s = pick_surface(p);
  const AffinePointData a = blaschke_conormal_frame(s, 0.15, -0.1);
  const Vec3<double> e = extended_bde_values(height_jet(s, 0.15, -0.1));
  const Vec3<double> lmn{a.l, a.m, a.n};
  EXPECT_LT(rel_residual(e, lmn), 1e-8);
  EXPECT_GT(dot(e, lmn), 0.0);
}

TEST(Affine, TorusClosedForm) {
  const auto c = torus_extended_bde(3.0, 1.0, kPi / 2);
  EXPECT_NEAR(c[0], -27.0, 1e-12);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_NEAR(c[2], 0.0, 1e-12);
  EXPECT_NEAR(torus_extended_bde(2.0, 1.0, 0.0)[0], 120.0, 1e-12);
  for (double u : {0.3, 2.0, 2.9}) {
    const Vec3<double> pipe = pipeline_extended_coeffs(torus_surface({2.0, 1.0}), u, 0.4);
    const Vec3<double> closed = torus_extended_bde(2.0, 1.0, u);
    EXPECT_LT(rel_residual(pipe, closed), 1e-9);
    EXPECT_GT(dot(pipe, closed), 0.0);
  }
}

TEST(Affine, RegionContainment) {
  PickParams p{.epsilon = 1, .sigma = 1.2};
  p.q = {{{4, 0}, 0.8}, {{2, 2}, -1.0}, {{0, 4}, 0.5}, {{3, 1}, 0.4}};
  for (int eps : {1, -1}) {
    p.epsilon = eps;
    const SurfaceDef s = pick_surface(p);
    for (double u = -0.3; u <= 0.3; u += 0.05) {
      for (double v = -0.3; v <= 0.3; v += 0.05) {
        const AffinePointData a = blaschke_conormal_frame(s, u, v);
        if (a.m * a.m - a.l * a.n < 0) continue;
        if (a.euclid_class == CurvatureClass::elliptic) {
          EXPECT_LE(a.K_aff, 1e-9);
        }
        if (a.euclid_class == CurvatureClass::hyperbolic) {
          EXPECT_GE(a.K_aff, -1e-9);
        }
        const double gdet = a.g11 * a.g22 - a.g12 * a.g12;
        EXPECT_EQ(std::signbit(a.m * a.m - a.l * a.n), std::signbit(-a.K_aff * gdet));
      }
    }
  }
}

TEST(Affine, NormalCurvature) {
  PickParams p{.epsilon = -1, .sigma = 0.5};
  p.q = {{{4, 0}, 1.0}, {{0, 4}, 0.3}};
  const AffinePointData a = blaschke_conormal_frame(pick_surface(p), 0.1, 0.05);
  EXPECT_NEAR(affine_normal_curvature(a, 0.3, 0.7), affine_normal_curvature(a, 0.6, 1.4), 1e-14);
  const double disc = a.m * a.m - a.l * a.n;
  if (disc > 0 && std::abs(a.n) > 1e-9) {
    const double pr = (-a.m + std::sqrt(disc)) / a.n;
    EXPECT_NEAR(affine_normal_curvature(a, 1.0, pr), 0.0, 1e-12);
  }
  EXPECT_THROW(blaschke_conormal_frame(torus_surface({3.0, 1.0}), kPi / 2, 0.0), DomainError);
}
