#include <gtest/gtest.h>

#include <cmath>

#include "affasym/singular.hpp"

using namespace affasym;

namespace {

std::vector<Polyline> discriminant_lines(const BdeField& f, int res = 128) {
  return trace_zero_set([&](double u, double v) { return discriminant(f, u, v); }, f.region(), res, res);
}

}  // namespace

TEST(Folded, RecoversLambdaAndKind) {
  for (bool pos : {false, true}) {
    for (double lambda : {-2.0, -0.5, 0.01, 0.05, 0.2, 1.0}) {
      const BdeField f = folded_model_field(lambda, pos, {-1, 1, -1, 1});
      const auto pts = find_folded_points(f, discriminant_lines(f));
      ASSERT_EQ(pts.size(), 1u) << lambda;
      EXPECT_NEAR(pts[0][0], 0.0, 1e-9);
      EXPECT_NEAR(pts[0][1], 0.0, 1e-9);
      const auto r = classify_folded(f, pts[0]);
      EXPECT_NEAR(*r.lambda, lambda, 1e-6);
      const double tr = r.metrics.at("trace");
      const std::complex<double> m1 = r.eigenvalues[0] / tr, m2 = r.eigenvalues[1] / tr;
      EXPECT_NEAR(std::abs(m1 + m2 - 1.0), 0.0, 1e-6);
      EXPECT_NEAR(std::abs(m1 * m2 - 4 * lambda), 0.0, 1e-6);
      const SingularKind want = lambda < 0 ? SingularKind::folded_saddle
                                : lambda < 1.0 / 16 ? SingularKind::folded_node
                                                    : SingularKind::folded_focus;
      EXPECT_EQ(r.kind, want) << lambda;
    }
  }
}

TEST(Folded, NearBoundaryIsUncertain) {
  const BdeField f = folded_model_field(1.0 / 16 + 1e-8);
  EXPECT_EQ(classify_folded(f, {0, 0}).kind, SingularKind::boundary_uncertain);
}

TEST(Folded, RejectsNonSingularPoint) {
  const BdeField f = folded_model_field(0.2);
  EXPECT_THROW(classify_folded(f, {0.5, 0.05}), PreconditionError);
}

TEST(Morse, Signature) {
  const auto r1 = classify_flat_affine_umbilic(morse_model_field(1), {0, 0});
  EXPECT_EQ(r1.kind, SingularKind::morse_isolated);
  EXPECT_EQ(*r1.hessian_signature, 1);
  ASSERT_EQ(r1.lifts.size(), 3u);
  const auto rm = classify_flat_affine_umbilic(morse_model_field(-1), {0, 0});
  EXPECT_EQ(rm.kind, SingularKind::morse_crossing);
  EXPECT_EQ(*rm.hessian_signature, -1);
  ASSERT_EQ(rm.lifts.size(), 1u);
  EXPECT_NEAR(rm.eigenvalues[0].real(), 2.0, 1e-9);
  EXPECT_NEAR(rm.eigenvalues[1].real(), -3.0, 1e-9);
}

TEST(Morse, RejectsNonDegeneratePoint) {
  EXPECT_THROW(classify_flat_affine_umbilic(morse_model_field(1), {0.3, 0.2}), PreconditionError);
}

TEST(CuspGauss, BothCuspsFlaggedAtOrigin) {
  CuspGaussParams p;
  p.q[{2, 1}] = 1.0;
  const SurfaceDef s = cusp_gauss_surface(p);
  const auto reports = detect_special_points(s, {-0.3, 0.3, -0.3, 0.3});
  bool euclid = false, affine = false;
  for (const auto& r : reports) {
    if (std::hypot(r.u, r.v) > 1e-6) continue;
    euclid = euclid || r.kind == SingularKind::cusp_of_gauss;
    affine = affine || r.kind == SingularKind::affine_cusp_of_gauss;
    EXPECT_LT(*r.tangency_angle, 1e-3);
  }
  EXPECT_TRUE(euclid);
  EXPECT_TRUE(affine);
}

TEST(CuspGauss, ContactOfParabolicCurves) {
  for (double q40 : {0.0, 0.1, -0.2}) {
    CuspGaussParams p;
    p.q[{2, 1}] = 1.0;
    p.q[{4, 0}] = q40;
    const ContactReport c = measure_parabolic_contact(cusp_gauss_surface(p), {0, 0});
    EXPECT_NEAR(c.parabolic[2], 1.0 - 6 * q40, 1e-3);
    EXPECT_NEAR(c.affine_parabolic[2], 2 * (4.0 - 17 * q40), 1e-3);
    EXPECT_EQ(c.contact_order, 2);
  }
}

TEST(Pick, AffineDirectionTransversalAwayFromCusps) {
  PickParams p;
  p.sigma = 1.0;
  p.q[{4, 0}] = 0.3;
  p.q[{2, 2}] = -0.1;
  const SurfaceDef s = pick_surface(p);
  const Region r{-0.4, 0.4, -0.4, 0.4};
  const BdeField f = surface_bde_field(s, r);
  const auto lines = discriminant_lines(f, 128);
  const auto cusps = find_folded_points(f, lines);
  if (!lines.empty()) {
    EXPECT_GT(min_tangency_angle(f, lines, cusps, 0.05), 1e-3);
  }
}

TEST(FlatEuclidUmbilic, Types) {
  FlatUmbilicParams p;
  p.epsilon = 1;
  const auto none = classify_flat_euclid_umbilic(flat_umbilic_surface(p), {0, 0});
  EXPECT_EQ(none.kind, SingularKind::flat_euclid_umbilic_no_lines);
  p.epsilon = -1;
  const auto focus = classify_flat_euclid_umbilic(flat_umbilic_surface(p), {0, 0});
  EXPECT_EQ(focus.kind, SingularKind::flat_euclid_umbilic_focus);
  EXPECT_GT(focus.metrics.at("blowup_Abar_min") * focus.metrics.at("blowup_Abar_max"), 0.0);
  EXPECT_LT(focus.metrics.at("blowup_Cbar_min") * focus.metrics.at("blowup_Abar_min"), 0.0);
}

TEST(FlatEuclidUmbilic, RejectsCurvedPoint) {
  FlatUmbilicParams p;
  EXPECT_THROW(classify_flat_euclid_umbilic(flat_umbilic_surface(p), {0.2, 0.1}), PreconditionError);
}
