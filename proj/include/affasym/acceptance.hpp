#pragma once

// Numeric acceptance checks, printed as TAP.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "affasym/affine.hpp"
#include "affasym/bde.hpp"
#include "affasym/conormal.hpp"
#include "affasym/flow.hpp"
#include "affasym/io.hpp"
#include "affasym/singular.hpp"
#include "affasym/surface.hpp"
#include "affasym/trace.hpp"

namespace affasym {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  LieCartanVariant variant = LieCartanVariant::standard;
};

namespace accept {

constexpr double kPi = std::numbers::pi;

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline double rel_residual(const Vec3<double>& a, const Vec3<double>& b) {
  const double t = dot(a, b) / dot(b, b);
  return norm(a - scale(t, b)) / norm(a);
}

// 1. extended BDE of the torus from the general pipeline vs. the closed form
inline CriterionResult torus_extended(const AcceptanceOptions&) {
  CriterionResult r{1, "torus extended BDE proportional to closed form"};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 2 * kPi), V(0.0, 2 * kPi);
  double worst = 0.0;
  bool positive = true;
  for (auto [R, rr] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.0}, std::pair{5.0, 2.0}}) {
    const SurfaceDef t = torus_surface({R, rr});
    int count = 0;
    while (count < 50) {
      const double u = U(rng), v = V(rng);
      if (std::abs(std::cos(u)) < 0.05) continue;
      ++count;
      const Vec3<double> pipe = pipeline_extended_coeffs(t, u, v);
      const Vec3<double> closed = torus_extended_bde(R, rr, u);
      worst = std::max(worst, rel_residual(pipe, closed));
      positive = positive && dot(pipe, closed) > 0;
    }
  }
  r.pass = positive && worst < 1e-7;
  r.detail = "max relative residual " + sci(worst) + (positive ? "" : ", negative factor");
  return r;
}

// 2. singular sets of the torus
inline CriterionResult torus_singular_sets(const AcceptanceOptions&) {
  CriterionResult r{2, "torus parabolic and affine parabolic sets, asymptotic rings"};
  std::string why;
  auto in_open = [](const std::vector<double>& roots) {
    std::vector<double> out;
    for (double c : roots) {
      if (c > -1 && c < 1) out.push_back(c);
    }
    return out;
  };
  for (auto [R, rr] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.0}, std::pair{5.0, 2.0}}) {
    const auto lroots = in_open(real_polynomial_roots({-3 * R * R, -8 * rr * R, 15 * R * R, 36 * rr * R, 16 * rr * rr}));
    // nbar = 4 c^2 (R^2 + R r c + 3 R^2 c^2 + 7 R r c^3 + 4 r^2 c^4)
    const auto nroots = in_open(real_polynomial_roots({R * R, R * rr, 3 * R * R, 7 * R * rr, 4 * rr * rr}));
    if (lroots.size() != 2) why += " lbar roots=" + std::to_string(lroots.size());
    if (!nroots.empty()) why += " nbar roots=" + std::to_string(nroots.size());
    if (lroots.size() != 2) continue;
    // closed-form roots agree with the coefficient function
    for (double c : lroots) {
      if (std::abs(torus_extended_bde(R, rr, std::acos(c))[0]) > 1e-9 * R * R) why += " lbar root check";
    }
    const double c1 = lroots[0], c2 = lroots[1];
    const SurfaceDef t = torus_surface({R, rr});
    int bad = 0;
    for (int k = 0; k < 512; ++k) {
      const double u = (k + 0.5) * 2 * kPi / 512;
      const Vec3<double> e = pipeline_extended_coeffs(t, u, 0.7);
      const double c = std::cos(u);
      const bool net = discriminant(e) > 0;
      const bool ring = c > c1 && c < c2;
      bad += net != ring;
    }
    if (bad) why += " ring scan mismatches=" + std::to_string(bad);
  }
  const SurfaceDef t = torus_surface({3.0, 1.0});
  auto K = [&](double u, double v) { return euclidean_data(eval_surface_jets<2>(t, u, v)).K; };
  const auto lines = trace_zero_set(K, {0.01, 2 * kPi - 0.01, 0.0, 1.0}, 256, 16);
  double off = 0.0;
  bool first = false, second = false;
  for (const auto& l : lines) {
    for (const Point2& p : l.pts) {
      const double d1 = std::abs(p[0] - kPi / 2), d2 = std::abs(p[0] - 3 * kPi / 2);
      off = std::max(off, std::min(d1, d2));
      first = first || d1 < 1e-6;
      second = second || d2 < 1e-6;
    }
  }
  if (lines.size() != 2 || !first || !second || off > 1e-6) why += " parabolic circles off by " + sci(off);
  r.pass = why.empty();
  r.detail = r.pass ? "2 lbar roots, no nbar roots, parabolic offset " + sci(off) + ", 3x512 scan consistent" : why;
  return r;
}

// 3. constant terms of l, m, n in the Pick chart
inline CriterionResult pick_constants(const AcceptanceOptions&) {
  CriterionResult r{3, "Pick chart constant terms of l, m, n"};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  double worst = 0.0;
  for (int eps : {1, -1}) {
    for (int t = 0; t < 20; ++t) {
      PickParams p{.epsilon = eps, .sigma = d(rng)};
      for (int j = 0; j <= 4; ++j) p.q[{4 - j, j}] = d(rng);
      p.q[{5, 0}] = d(rng);
      p.q[{2, 3}] = d(rng);
      const AffinePointData a = blaschke_conormal_frame(pick_surface(p), 0.0, 0.0);
      const double s2 = p.sigma * p.sigma, e = eps;
      const double l = -s2 / 2 + p.q[{4, 0}] / 4 + e * p.q[{2, 2}] / 4;
      const double m = (p.q[{3, 1}] + e * p.q[{1, 3}]) / 4;
      const double n = -e * s2 / 2 + p.q[{2, 2}] / 4 + e * p.q[{0, 4}] / 4;
      worst = std::max({worst, std::abs(a.l - l), std::abs(a.m - m), std::abs(a.n - n)});
    }
  }
  r.pass = worst < 1e-9;
  r.detail = "40 draws, max error " + sci(worst);
  return r;
}

// 4. flat affine umbilic and the Morse models
inline CriterionResult flat_affine_umbilic(const AcceptanceOptions& opt) {
  CriterionResult r{4, "flat affine umbilic conditions and Morse lifts"};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double worst = 0.0;
  for (int eps : {1, -1}) {
    for (int t = 0; t < 10; ++t) {
      const double sigma = d(rng), q40 = d(rng), q13 = d(rng);
      PickParams p{.epsilon = eps, .sigma = sigma};
      p.q = {{{4, 0}, q40},
             {{0, 4}, q40},
             {{1, 3}, q13},
             {{3, 1}, -eps * q13},
             {{2, 2}, -eps * (-2 * sigma * sigma + q40)},
             {{5, 0}, d(rng)},
             {{1, 4}, d(rng)}};
      const AffinePointData a = blaschke_conormal_frame(pick_surface(p), 0.0, 0.0);
      worst = std::max({worst, std::abs(a.l), std::abs(a.m), std::abs(a.n)});
    }
  }
  std::string why;
  if (!(worst < 1e-10)) why += " |lmn|=" + sci(worst);

  const BdeField saddle = morse_model_field(-1);
  const auto lifts_s = degenerate_point_lifts(saddle, 0.0, 0.0);
  if (lifts_s.size() != 1) {
    why += " eps1=-1 lifts=" + std::to_string(lifts_s.size());
  } else {
    const Linearization lin = linearize(saddle, lifts_s[0], opt.variant);
    const double e1 = std::max(lin.mu1.real(), lin.mu2.real()), e2 = std::min(lin.mu1.real(), lin.mu2.real());
    const double err = std::max({std::abs(e1 - 2), std::abs(e2 + 3), std::abs(lin.mu1.imag()), std::abs(lin.mu2.imag())});
    if (!(err < 1e-6)) why += " eigenvalues (" + sci(e1) + ", " + sci(e2) + ")";
  }
  const auto lifts_c = degenerate_point_lifts(morse_model_field(1), 0.0, 0.0);
  std::vector<double> slopes;
  for (const auto& s : lifts_c) slopes.push_back(slope_p(s));
  std::sort(slopes.begin(), slopes.end());
  const std::vector<double> want = {-std::sqrt(3.0), 0.0, std::sqrt(3.0)};
  bool ok = slopes.size() == 3;
  for (std::size_t k = 0; ok && k < 3; ++k) ok = std::abs(slopes[k] - want[k]) < 1e-6;
  if (!ok) why += " eps1=+1 slopes wrong";
  r.pass = why.empty();
  r.detail = r.pass ? "max |l|,|m|,|n| " + sci(worst) + ", eigenvalues (2, -3), slopes {0, +-sqrt 3}" : why;
  return r;
}

// 5. folded singularities of the synthetic family
inline CriterionResult folded(const AcceptanceOptions& opt) {
  CriterionResult r{5, "folded saddle/node/focus classification"};
  double lam_err = 0.0, eig_err = 0.0;
  std::string why;
  for (double lambda : {-2.0, -0.5, 0.01, 0.05, 0.2, 1.0}) {
    for (bool pos : {false, true}) {
      const BdeField f = folded_model_field(lambda, pos);
      const auto lines = trace_zero_set([&](double u, double v) { return discriminant(f, u, v); }, f.region(), 128, 128);
      const auto pts = find_folded_points(f, lines);
      if (pts.size() != 1) {
        why += " lambda=" + sci(lambda) + " points=" + std::to_string(pts.size());
        continue;
      }
      const SingularPointReport rep = classify_folded(f, pts[0], {}, opt.variant);
      lam_err = std::max(lam_err, std::abs(*rep.lambda - lambda));
      const SingularKind want = lambda < 0 ? SingularKind::folded_saddle
                                : lambda < 1.0 / 16 ? SingularKind::folded_node
                                                    : SingularKind::folded_focus;
      if (rep.kind != want) why += " lambda=" + sci(lambda) + " kind=" + to_string(rep.kind);
      const double tr = rep.metrics.at("trace");
      const std::complex<double> s = std::sqrt(std::complex<double>(1 - 16 * lambda));
      const std::complex<double> w1 = (1.0 + s) / 2.0, w2 = (1.0 - s) / 2.0;
      const std::complex<double> m1 = rep.eigenvalues[0] / tr, m2 = rep.eigenvalues[1] / tr;
      eig_err = std::max(eig_err, std::min(std::max(std::abs(m1 - w1), std::abs(m2 - w2)),
                                           std::max(std::abs(m1 - w2), std::abs(m2 - w1))));
    }
  }
  if (!(lam_err < 1e-4)) why += " lambda error " + sci(lam_err);
  if (!(eig_err < 1e-6)) why += " eigenvalue error " + sci(eig_err);
  r.pass = why.empty();
  r.detail = r.pass ? "lambda error " + sci(lam_err) + ", eigenvalue error " + sci(eig_err) : why;
  return r;
}

// 6. cusp of Gauss
inline CriterionResult cusp_of_gauss(const AcceptanceOptions&) {
  CriterionResult r{6, "cusp of Gauss coefficients and parabolic contact"};
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> d(-1.0, 1.0), mag(0.5, 2.0);
  std::string why;
  double cerr = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double q21 = d(rng) < 0 ? -mag(rng) : mag(rng);
    CuspGaussParams p;
    p.q = {{{2, 1}, q21}, {{0, 3}, d(rng)}, {{4, 0}, d(rng)}, {{3, 1}, d(rng)}, {{2, 2}, d(rng)}, {{5, 1}, d(rng)}};
    const Vec3<double> c = extended_bde_values(height_jet(cusp_gauss_surface(p), 0.0, 0.0));
    const double want = -48 * q21 * q21;
    if (c[0] != 0.0 || c[1] != 0.0) why += " nonzero A or B";
    cerr = std::max(cerr, std::abs(c[2] - want) / std::abs(want));
  }
  if (!(cerr < 1e-14)) why += " C relative error " + sci(cerr);
  double fit = 0.0;
  for (int t = 0; t < 4; ++t) {
    const double q21 = d(rng) < 0 ? -mag(rng) : mag(rng), q40 = 0.2 * d(rng);
    CuspGaussParams p;
    p.q = {{{2, 1}, q21}, {{4, 0}, q40}};
    const ContactReport c = measure_parabolic_contact(cusp_gauss_surface(p), {0.0, 0.0});
    fit = std::max({fit, std::abs(c.parabolic[2] - (q21 * q21 - 6 * q40) / q21),
                    std::abs(c.affine_parabolic[2] - 2 * (4 * q21 * q21 - 17 * q40) / q21)});
    if (c.contact_order != 2) why += " contact order " + std::to_string(c.contact_order);
  }
  if (!(fit < 1e-3)) why += " fit error " + sci(fit);
  r.pass = why.empty();
  r.detail = r.pass ? "(0, 0, -48 q21^2) relative error " + sci(cerr) + ", quadratic fit error " + sci(fit) : why;
  return r;
}

// 7. flat Euclidean umbilic
inline CriterionResult flat_euclid_umbilic(const AcceptanceOptions&) {
  CriterionResult r{7, "flat Euclidean umbilic types, spiral and discriminant"};
  std::string why;
  FlatUmbilicParams plus;
  plus.epsilon = 1;
  const BdeField fp = surface_bde_field(flat_umbilic_surface(plus), {-1, 1, -1, 1});
  double dmax = -1e300;
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j) {
      if (i == 0 && j == 0) continue;
      dmax = std::max(dmax, discriminant(fp, 1e-3 * i, 1e-3 * j));
    }
  }
  if (!(dmax <= 1e-12)) why += " eps=+1 delta max " + sci(dmax);

  FlatUmbilicParams minus;
  minus.epsilon = -1;
  const SurfaceDef sm = flat_umbilic_surface(minus);
  const SingularPointReport rep = classify_flat_euclid_umbilic(sm, {0.0, 0.0});
  if (rep.kind != SingularKind::flat_euclid_umbilic_focus) why += std::string(" eps=-1 kind ") + to_string(rep.kind);
  const BdeField fm = surface_bde_field(sm, {-2, 2, -2, 2});
  IntegrateOptions io;
  io.degenerate_points = {{0.0, 0.0}};
  double wind = 0.0;
  for (int fam = 0; fam < 2; ++fam) {
    for (int dir : {1, -1}) {
      const Trajectory t = integrate_asymptotic(fm, {1.0, 0.3}, fam, dir, io);
      if (t.termination == Termination::hit_degenerate_point) wind = std::max(wind, std::abs(winding_number(t, {0, 0})));
    }
  }
  if (!(wind > 2)) why += " winding " + sci(wind);

  // leading part of b^2 - 4ac in the chart u^3 + eps u v^2
  double ferr = 0.0;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int eps : {1, -1}) {
    FlatUmbilicParams p;
    p.epsilon = eps;
    p.k = 1.0;
    p.q = {{{4, 0}, d(rng)}, {{2, 2}, d(rng)}, {{1, 3}, d(rng)}, {{5, 0}, d(rng)}};
    const BdeField f = surface_bde_field(flat_umbilic_surface(p), {-1, 1, -1, 1});
    double num = 0.0, den = 0.0;
    const double rad = 1e-4;
    for (int k = 0; k < 64; ++k) {
      const double a = 2 * kPi * (k + 0.25) / 64, u = rad * std::cos(a), v = rad * std::sin(a);
      const double basis = eps * std::pow(eps * v * v - 3 * u * u, 2);
      num += 4 * discriminant(f, u, v) * basis;
      den += basis * basis;
    }
    ferr = std::max(ferr, std::abs(num / den + 589824.0) / 589824.0);
  }
  if (!(ferr < 1e-3)) why += " discriminant fit error " + sci(ferr);
  r.pass = why.empty();
  r.detail = r.pass ? "eps=+1 delta max " + sci(dmax) + ", focus, winding " + sci(wind) + ", fit error " + sci(ferr) : why;
  return r;
}

inline double pullback_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  if (a.samples.empty() || b.samples.size() < 2) return 1e300;
  const double reach = 0.9 * std::min(a.samples.back().arclength, b.samples.back().arclength);
  for (const auto& s : a.samples) {
    if (s.arclength >= reach) continue;
    double best = 1e300;
    for (std::size_t k = 1; k < b.samples.size(); ++k) {
      const double du = b.samples[k].u - b.samples[k - 1].u, dv = b.samples[k].v - b.samples[k - 1].v;
      const double L2 = du * du + dv * dv;
      double w = L2 > 0 ? ((s.u - b.samples[k - 1].u) * du + (s.v - b.samples[k - 1].v) * dv) / L2 : 0.0;
      w = std::clamp(w, 0.0, 1.0);
      best = std::min(best, std::hypot(s.u - b.samples[k - 1].u - w * du, s.v - b.samples[k - 1].v - w * dv));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// 8. conormal correspondence
inline CriterionResult conormal(const AcceptanceOptions&) {
  CriterionResult r{8, "conormal second form proportional to affine third form"};
  std::string why;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), loc(-0.3, 0.3);
  const SurfaceDef torus = torus_surface({3.0, 1.0});
  std::vector<Point2> tp;
  while (tp.size() < 100) {
    const double u = ang(rng), v = ang(rng);
    if (std::abs(std::cos(u)) > 0.05) tp.push_back({u, v});
  }
  PickParams pp;
  pp.sigma = 0.7;
  pp.q = {{{4, 0}, 0.4}, {{1, 3}, -0.3}, {{2, 2}, 0.2}, {{5, 0}, 0.2}};
  const SurfaceDef pick = pick_surface(pp);
  std::vector<Point2> pk;
  while (pk.size() < 100) {
    const double u = loc(rng), v = loc(rng);
    if (std::abs(euclidean_data(eval_surface_jets<2>(pick, u, v)).K) > 1e-3) pk.push_back({u, v});
  }
  double res = 0.0, nres = 0.0;
  int sign_bad = 0;
  for (const auto& [def, pts] : {std::pair{&torus, &tp}, std::pair{&pick, &pk}}) {
    for (const ConormalRow& row : verify_conormal_correspondence(*def, *pts)) {
      res = std::max(res, row.residual);
      nres = std::max(nres, row.normal_residual);
      if (std::abs(row.det_lmn) > 1e-9 && (row.det_nu > 0) != (row.det_lmn > 0)) ++sign_bad;
    }
  }
  if (!(res < 1e-7)) why += " form residual " + sci(res);
  if (!(nres < 1e-7)) why += " normal residual " + sci(nres);
  if (sign_bad) why += " parabolic sign mismatches " + std::to_string(sign_bad);

  const Region reg{kPi / 2 + 0.05, 2.2, 0, 2 * kPi};
  const BdeField aff = surface_bde_field(torus, reg);
  const BdeField con = conormal_asymptotic_field(torus, reg);
  IntegrateOptions o;
  o.max_step = 2e-3;
  o.max_length = 1.0;
  const Point2 seed{1.8, 1.0};
  const auto da = asymptotic_directions(aff, seed[0], seed[1]);
  const auto dc = asymptotic_directions(con, seed[0], seed[1]);
  double traj = 0.0;
  if (da.dirs.size() != 2 || dc.dirs.size() != 2) {
    why += " seed has no asymptotic pair";
  } else {
    for (int fam = 0; fam < 2; ++fam) {
      const auto a = da.dirs[static_cast<std::size_t>(fam)];
      auto cross2 = [&](const std::array<double, 2>& b) { return std::abs(a[0] * b[1] - a[1] * b[0]); };
      const std::size_t cf = cross2(dc.dirs[1]) < cross2(dc.dirs[0]) ? 1 : 0;
      const int dir = a[0] * dc.dirs[cf][0] + a[1] * dc.dirs[cf][1] > 0 ? 1 : -1;
      const Trajectory ta = integrate_asymptotic(aff, seed, fam, 1, o);
      const Trajectory tb = integrate_asymptotic(con, seed, static_cast<int>(cf), dir, o);
      traj = std::max(traj, pullback_distance(ta, tb));
    }
  }
  if (!(traj < 1e-5)) why += " trajectory pullback distance " + sci(traj);
  r.pass = why.empty();
  r.detail = r.pass ? "200 samples, residual " + sci(res) + ", normal " + sci(nres) + ", trajectories " + sci(traj) : why;
  return r;
}

// 9. jet partials against central differences of lower-order entries
struct JetProbe {
  std::string name;
  std::function<Jet<3>(double, double)> fn;
  std::function<Point2(std::mt19937_64&)> draw;
};

inline double fd_worst(const JetProbe& probe, int points, std::mt19937_64& rng) {
  const double h = 1e-4;
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    const Point2 p = probe.draw(rng);
    const Jet<3> j = probe.fn(p[0], p[1]);
    const Jet<3> up = probe.fn(p[0] + h, p[1]), um = probe.fn(p[0] - h, p[1]);
    const Jet<3> vp = probe.fn(p[0], p[1] + h), vm = probe.fn(p[0], p[1] - h);
    for (int deg = 1; deg <= 3; ++deg) {
      for (int jj = 0; jj <= deg; ++jj) {
        const int ii = deg - jj;
        const double fd = ii > 0 ? (up(ii - 1, jj) - um(ii - 1, jj)) / (2 * h) : (vp(ii, jj - 1) - vm(ii, jj - 1)) / (2 * h);
        worst = std::max(worst, std::abs(j(ii, jj) - fd) / std::max(1e-5, 1e-3 * std::abs(fd)));
      }
    }
  }
  return worst;
}

inline CriterionResult jet_oracle(const AcceptanceOptions&) {
  CriterionResult r{9, "jet partials match finite differences"};
  auto box = [](double a) { return [a](std::mt19937_64& g) {
    std::uniform_real_distribution<double> d(-a, a);
    const double u = d(g);
    return Point2{u, d(g)};
  }; };
  auto torus_pt = [](std::mt19937_64& g) {
    std::uniform_real_distribution<double> d(0.0, 2 * kPi);
    for (;;) {
      const double u = d(g), v = d(g);
      if (std::abs(std::cos(u)) > 0.1) return Point2{u, v};
    }
  };
  const Expr e = parse_expression("exp(u/3)*sin(v + 0.4) + (u^2 + v^2 + 1)^(3/2) - log(2 + cos(u*v)) + tan(u/4)");
  const SurfaceDef torus = torus_surface({3.0, 1.0});
  PickParams pp{.epsilon = -1, .sigma = 0.6};
  pp.q = {{{4, 0}, 0.7}, {{3, 1}, -0.4}, {{2, 2}, 0.3}, {{0, 4}, -0.9}, {{5, 0}, 0.5}, {{3, 4}, 0.2}};
  const SurfaceDef pick = pick_surface(pp);
  const SurfaceDef monge = monge_surface("sin(u)*cos(v) + (u^2 + 2*v^2)/2");
  std::vector<JetProbe> probes;
  probes.push_back({"expression", [e](double u, double v) { return e.jet<3>(u, v); }, box(1.0)});
  for (int k = 0; k < 3; ++k) {
    probes.push_back({"torus position", [torus, k](double u, double v) { return eval_surface_jets<3>(torus, u, v)[k]; },
                      torus_pt});
    probes.push_back({"torus conormal", [torus, k](double u, double v) { return conormal_jets<3>(torus, u, v)[k]; },
                      torus_pt});
    probes.push_back({"torus extended BDE (closed form)",
                      [k](double u, double) { return torus_extended_bde(3.0, 1.0, Jet<3>::seed(Var::u, u))[k]; },
                      torus_pt});
    probes.push_back({"torus extended BDE (pipeline)",
                      [torus, k](double u, double v) { return pipeline_extended_jets<7>(torus, u, v)[k]; }, torus_pt});
    probes.push_back({"pick extended BDE",
                      [pick, k](double u, double v) { return extended_bde_coeffs(height_jet<7>(pick, u, v))[k]; },
                      box(0.3)});
    probes.push_back({"pick conormal", [pick, k](double u, double v) { return conormal_jets<3>(pick, u, v)[k]; },
                      box(0.2)});
    probes.push_back({"monge extended BDE",
                      [monge, k](double u, double v) { return extended_bde_coeffs(height_jet<7>(monge, u, v))[k]; },
                      box(0.3)});
  }
  std::mt19937_64 rng(31);
  double worst = 0.0;
  std::string which;
  for (const auto& p : probes) {
    const double w = fd_worst(p, 200, rng);
    if (w > worst) {
      worst = w;
      which = p.name;
    }
  }
  r.pass = worst <= 1.0;
  r.detail = std::to_string(probes.size()) + " functions x 200 points, worst error/tolerance " + sci(worst) + " (" + which + ")";
  return r;
}

// 10. portrait determinism
inline CriterionResult determinism(const AcceptanceOptions&) {
  CriterionResult r{10, "portrait output is byte-identical across runs"};
  const SurfaceDef t = torus_surface({3.0, 1.0});
  const Region reg = default_region(t);
  const Portrait a = build_portrait(t, reg);
  const Portrait b = build_portrait(t, reg);
  const std::string sa = portrait_svg(a), sb = portrait_svg(b);
  const std::string ja = to_json(a).dump(1), jb = to_json(b).dump(1);
  r.pass = !a.trajectories.empty() && sa == sb && ja == jb;
  r.detail = std::to_string(a.trajectories.size()) + " trajectories, svg " + std::to_string(sa.size()) + " bytes, json " +
             std::to_string(ja.size()) + " bytes" + (r.pass ? "" : ", outputs differ");
  return r;
}

}  // namespace accept

inline std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> acceptance_checks() {
  return {accept::torus_extended, accept::torus_singular_sets, accept::pick_constants, accept::flat_affine_umbilic,
          accept::folded,         accept::cusp_of_gauss,       accept::flat_euclid_umbilic, accept::conormal,
          accept::jet_oracle,     accept::determinism};
}

/// Runs every check, writes TAP lines and returns the number of failures.
inline int run_acceptance(std::ostream& out, const AcceptanceOptions& opt = {}) {
  const auto checks = acceptance_checks();
  out << "1.." << checks.size() << "\n";
  int failed = 0;
  for (const auto& check : checks) {
    CriterionResult res;
    try {
      res = check(opt);
    } catch (const std::exception& e) {
      res.id = static_cast<int>(&check - checks.data()) + 1;
      res.name = "criterion " + std::to_string(res.id);
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    failed += !res.pass;
    out << (res.pass ? "ok " : "not ok ") << res.id << " - " << res.name << " # " << res.detail << "\n" << std::flush;
  }
  return failed;
}

}  // namespace affasym
