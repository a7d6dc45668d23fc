#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "affasym/conormal.hpp"
#include "affasym/flow.hpp"

using namespace affasym;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Conormal, TorusValueAtOrigin) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  const auto n = detail::values(conormal_jets<0>(t, 0.0, 0.0));
  EXPECT_NEAR(norm(n), std::pow(4.0, 0.25), 1e-12);
  EXPECT_NEAR(std::abs(n[0]), std::pow(4.0, 0.25), 1e-12);
  EXPECT_NEAR(n[1], 0.0, 1e-12);
  EXPECT_NEAR(n[2], 0.0, 1e-12);
}

TEST(Conormal, QuadricIsDegenerate) {
  const SurfaceDef q = monge_surface("(u^2 + v^2)/2");
  const auto n = detail::values(conormal_jets<0>(q, 0.0, 0.0));
  EXPECT_NEAR(n[0], 0.0, 1e-15);
  EXPECT_NEAR(n[1], 0.0, 1e-15);
  EXPECT_NEAR(n[2], 1.0, 1e-15);
  const auto rows = verify_conormal_correspondence(q, {{0.0, 0.0}, {0.3, -0.2}});
  for (const auto& r : rows) {
    EXPECT_TRUE(r.degenerate);
    EXPECT_LT(r.normal_residual, 1e-12);
  }
}

TEST(Conormal, TorusCorrespondence) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 2 * kPi);
  std::vector<Point2> pts;
  while (pts.size() < 50) {
    const double u = U(rng), v = U(rng);
    if (std::abs(std::cos(u)) > 0.05) pts.push_back({u, v});
  }
  for (const auto& r : verify_conormal_correspondence(t, pts)) {
    EXPECT_FALSE(r.degenerate);
    EXPECT_LT(r.residual, 1e-7);
    EXPECT_LT(r.normal_residual, 1e-7);
    EXPECT_NE(r.lambda, 0.0);
    EXPECT_EQ(r.det_nu > 0, r.det_lmn > 0);
  }
}

TEST(Conormal, PickCorrespondenceAndParabolicSign) {
  PickParams p;
  p.sigma = 0.7;
  p.q[{4, 0}] = 0.4;
  p.q[{1, 3}] = -0.3;
  p.q[{5, 0}] = 0.2;
  const SurfaceDef s = pick_surface(p);
  std::vector<Point2> pts;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) pts.push_back({-0.3 + 0.1 * i, -0.3 + 0.1 * j});
  }
  for (const auto& r : verify_conormal_correspondence(s, pts)) {
    EXPECT_LT(r.residual, 1e-7);
    EXPECT_LT(r.normal_residual, 1e-7);
    if (std::abs(r.det_lmn) > 1e-9) {
      EXPECT_EQ(r.det_nu > 0, r.det_lmn > 0);
    }
  }
}

TEST(Conormal, ParabolicSampleIsDomainError) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  EXPECT_THROW(verify_conormal_correspondence(t, {{kPi / 2, 0.3}}), DomainError);
}

TEST(Mesh, TorusComponents) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  const ConormalMesh one = conormal_mesh(t, {-kPi / 2 + 0.05, kPi / 2 - 0.05, 0, 2 * kPi}, 32, 32);
  EXPECT_EQ(one.components, 1);
  EXPECT_EQ(one.clipped, 0);
  const ConormalMesh both = conormal_mesh(t, {0, 2 * kPi, 0, 2 * kPi}, 64, 32);
  EXPECT_EQ(both.components, 2);
  const std::string obj = export_obj(both);
  std::size_t objects = 0;
  for (std::size_t pos = 0; (pos = obj.find("\no ", pos)) != std::string::npos; ++pos) ++objects;
  EXPECT_EQ(objects, 2u);
}

TEST(Mesh, GuardTooSmallIsDomainError) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  Tolerances tol;
  tol.conormal_guard = 1e-5;
  EXPECT_THROW(conormal_mesh(t, {kPi / 2 - 0.01, kPi / 2 + 0.01, 0, 1}, 20, 4, tol), DomainError);
}

TEST(Mesh, ObjLayout) {
  const SurfaceDef q = monge_surface("(u^2 + v^2)/2");
  const ConormalMesh m = conormal_mesh(q, {0, 1, 0, 1}, 1, 1);
  const std::string obj = export_obj(m);
  int v = 0, f = 0;
  for (std::size_t pos = 0; pos < obj.size();) {
    const std::size_t end = obj.find('\n', pos);
    const std::string line = obj.substr(pos, end - pos);
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
    pos = end + 1;
  }
  EXPECT_EQ(v, 4);
  EXPECT_EQ(f, 1);
  EXPECT_NE(obj.find("f 1 2 3 4"), std::string::npos);
  ConormalMesh empty;
  EXPECT_EQ(export_obj(empty), "# affasym conormal mesh\n");
}

TEST(Mesh, VertexCapClips) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  Tolerances tol;
  tol.conormal_guard = 2e-3;
  tol.vertex_cap = 2.0;
  const ConormalMesh m = conormal_mesh(t, {kPi / 2 + 2.5e-3, kPi / 2 + 0.5, 0, 1}, 50, 4, tol);
  EXPECT_GT(m.clipped, 0);
}

TEST(ConormalField, AsymptoticLinesMatchAffineLines) {
  const SurfaceDef t = torus_surface({3.0, 1.0});
  const Region r{kPi / 2 + 0.05, 2.2, 0, 2 * kPi};
  const BdeField aff = surface_bde_field(t, r);
  const BdeField con = conormal_asymptotic_field(t, r);
  IntegrateOptions o;
  o.max_step = 2e-3;
  o.max_length = 1.0;
  const Point2 seed{1.8, 1.0};
  const auto da = asymptotic_directions(aff, seed[0], seed[1]);
  const auto dc = asymptotic_directions(con, seed[0], seed[1]);
  ASSERT_EQ(da.dirs.size(), 2u);
  ASSERT_EQ(dc.dirs.size(), 2u);
  for (int fam = 0; fam < 2; ++fam) {
    const auto d = da.dirs[static_cast<std::size_t>(fam)];
    int cf = 0;
    if (std::abs(d[0] * dc.dirs[1][1] - d[1] * dc.dirs[1][0]) < std::abs(d[0] * dc.dirs[0][1] - d[1] * dc.dirs[0][0])) cf = 1;
    const double sgn = d[0] * dc.dirs[static_cast<std::size_t>(cf)][0] + d[1] * dc.dirs[static_cast<std::size_t>(cf)][1];
    const Trajectory a = integrate_asymptotic(aff, seed, fam, 1, o);
    const Trajectory b = integrate_asymptotic(con, seed, cf, sgn > 0 ? 1 : -1, o);
    double worst = 0.0;
    for (const auto& s : a.samples) {
      double best = 1e300;
      for (std::size_t k = 1; k < b.samples.size(); ++k) {
        const double du = b.samples[k].u - b.samples[k - 1].u, dv = b.samples[k].v - b.samples[k - 1].v;
        const double L2 = du * du + dv * dv;
        double w = L2 > 0 ? ((s.u - b.samples[k - 1].u) * du + (s.v - b.samples[k - 1].v) * dv) / L2 : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        best = std::min(best, std::hypot(s.u - b.samples[k - 1].u - w * du, s.v - b.samples[k - 1].v - w * dv));
      }
      if (s.arclength < 0.9 * std::min(a.samples.back().arclength, b.samples.back().arclength)) worst = std::max(worst, best);
    }
    EXPECT_LT(worst, 1e-5) << fam;
  }
}
