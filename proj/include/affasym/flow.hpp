#pragma once

// Integral curves of the asymptotic net through the lifted Lie-Cartan field,
// and phase portraits over a region.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "affasym/bde.hpp"
#include "affasym/error.hpp"
#include "affasym/parallel.hpp"
#include "affasym/region.hpp"
#include "affasym/singular.hpp"
#include "affasym/surface.hpp"
#include "affasym/tolerances.hpp"
#include "affasym/trace.hpp"

namespace affasym {

enum class Termination { left_domain, hit_degenerate_point, closed_loop, max_length };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::left_domain: return "left_domain";
    case Termination::hit_degenerate_point: return "hit_degenerate_point";
    case Termination::closed_loop: return "closed_loop";
    case Termination::max_length: return "max_length";
  }
  return "?";
}

struct TrajectorySample {
  double u = 0.0, v = 0.0, slope = 0.0;
  Chart chart = Chart::P;
  double arclength = 0.0;  // lifted
};

struct Trajectory {
  int family = 0;     // 0 plus root, 1 minus root
  int direction = 1;  // +1 along the root direction, -1 against
  Point2 seed{};
  std::vector<TrajectorySample> samples;
  Termination termination = Termination::max_length;
  bool planar_fallback = false;
};

struct IntegrateOptions {
  double rtol = 1e-8;
  double atol = 1e-13;
  double max_step = 0.0;            // absolute; 0 means max_step_fraction * region diagonal
  double max_step_fraction = 1e-2;
  double max_length = 0.0;          // lifted arclength; 0 means 20 * region diagonal
  std::size_t max_steps = 400000;
  double stall_ratio = 1e-9;        // |X| against the size of the coefficient jets
  double loop_tol = 1e-6;
  std::vector<Point2> degenerate_points;
};

namespace detail {

using Y3 = std::array<double, 3>;

inline Y3 axpy(const Y3& y, double h, const Y3& k) { return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; }

inline double jet_scale(const Vec3<Jet<1>>& j, double s) {
  double sc = 0.0;
  for (const auto& x : j) sc += std::abs(x.value()) + std::abs(x(1, 0)) + std::abs(x(0, 1));
  return sc * (1.0 + s * s);
}

/// Angle of the planar direction of a state, in (-pi/2, pi/2].
inline double direction_angle(double slope, Chart chart) {
  return chart == Chart::P ? std::atan(slope) : (slope == 0.0 ? std::numbers::pi / 2 : std::atan(1.0 / slope));
}

inline double angle_mod_pi(double a) {
  a = std::fmod(a, std::numbers::pi);
  if (a > std::numbers::pi / 2) a -= std::numbers::pi;
  if (a < -std::numbers::pi / 2) a += std::numbers::pi;
  return a;
}

/// Fraction t in (0, 1] where the segment a -> b leaves the region.
inline double exit_fraction(const Region& r, Point2 a, Point2 b) {
  double t = 1.0;
  auto clip = [&](double x0, double x1, double lo, double hi) {
    if (x1 < lo && x0 >= lo) t = std::min(t, (lo - x0) / (x1 - x0));
    if (x1 > hi && x0 <= hi) t = std::min(t, (hi - x0) / (x1 - x0));
  };
  clip(a[0], b[0], r.u0, r.u1);
  clip(a[1], b[1], r.v0, r.v1);
  return std::clamp(t, 0.0, 1.0);
}

// Dormand-Prince 5(4) tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace detail

/// Integrates one asymptotic line through `seed` along the root `family`
/// (0 = plus, 1 = minus) in `direction` (+1 or -1). The lifted field is
/// normalised to unit speed, integrated by adaptive Dormand-Prince 5(4) and
/// projected back onto the lifted surface after every step. Where the lifted
/// field vanishes along a curve of equilibria the planar direction field is
/// followed instead.
inline Trajectory integrate_asymptotic(const BdeField& f, Point2 seed, int family, int direction,
                                       const IntegrateOptions& opt = {}, const Tolerances& tol = {}) {
  if (direction != 1 && direction != -1) throw ConfigError("direction must be +1 or -1");
  if (family != 0 && family != 1) throw ConfigError("family must be 0 or 1");
  const Region& region = f.region();
  region.validate();
  const double diag = region.diagonal();
  const double hmax = opt.max_step > 0 ? opt.max_step : opt.max_step_fraction * diag;
  const double max_len = opt.max_length > 0 ? opt.max_length : 20 * diag;
  const double hmin = 1e-13 * diag;

  const DirectionSet ds = asymptotic_directions(f, seed[0], seed[1], tol);
  if (ds.degenerate) throw DomainError("seed is a totally degenerate point");
  if (ds.dirs.empty()) throw DomainError("no real asymptotic direction at the seed");
  const auto d0 = ds.dirs[std::min<std::size_t>(family, ds.dirs.size() - 1)];

  Trajectory tr;
  tr.family = family;
  tr.direction = direction;
  tr.seed = seed;
  LiftedState st = lift_direction(seed[0], seed[1], d0);
  double len = 0.0;
  tr.samples.push_back({st.u, st.v, st.slope, st.chart, 0.0});

  // orientation of the raw field relative to the requested planar direction
  Point2 prev_planar{direction * d0[0], direction * d0[1]};
  double orient = direction;
  {
    const Vec3<double> X = lie_cartan(f, st);
    const double dp = X[0] * d0[0] + X[1] * d0[1];
    if (dp != 0.0) orient = direction * (dp > 0 ? 1.0 : -1.0);
  }

  auto lifted_rhs = [&](const detail::Y3& y, Chart chart, double& speed_ratio) {
    const LiftedState s{y[0], y[1], y[2], chart};
    const auto j = f.coeffs_jet1(s.u, s.v);
    const Vec3<double> X = lie_cartan(j, s);
    const double n = norm(X);
    speed_ratio = n / std::max(detail::jet_scale(j, s.slope), 1e-300);
    if (!(n > 0) || !std::isfinite(n)) throw DomainError("lifted field vanishes");
    return detail::Y3{orient * X[0] / n, orient * X[1] / n, orient * X[2] / n};
  };
  auto stall_ratio_at = [&](const LiftedState& s) {
    const auto j = f.coeffs_jet1(s.u, s.v);
    return norm(lie_cartan(j, s)) / std::max(detail::jet_scale(j, s.slope), 1e-300);
  };
  auto project = [&](LiftedState s) {
    for (int it = 0; it < 6; ++it) {
      const auto j = f.coeffs_jet1(s.u, s.v);
      const Vec3<double> c{j[0].value(), j[1].value(), j[2].value()};
      const double F = lifted_residual(c, s);
      if (normalized_residual(c, s) < 1e-15) break;
      const Vec3<double> g = lifted_gradient(j, s);
      const double g2 = dot(g, g);
      if (!(g2 > 0)) break;
      s.u -= F * g[0] / g2;
      s.v -= F * g[1] / g2;
      s.slope -= F * g[2] / g2;
    }
    return s;
  };
  auto project_slope = [&](LiftedState s) {
    try {
      for (int it = 0; it < 20; ++it) {
        const Vec3<double> c = f.coeffs(s.u, s.v);
        const double F = lifted_residual(c, s);
        const double Fs = s.chart == Chart::P ? 2 * c[1] + 2 * c[2] * s.slope : 2 * c[1] + 2 * c[0] * s.slope;
        if (normalized_residual(c, s) < 1e-15 || !(std::abs(Fs) > 0)) break;
        s.slope -= F / Fs;
      }
    } catch (const Error&) {
    }
    return s;
  };
  auto near_degenerate = [&](const LiftedState& s) {
    for (const Point2& p : opt.degenerate_points) {
      if (std::hypot(s.u - p[0], s.v - p[1]) < tol.degenerate_radius) return true;
    }
    return false;
  };
  // planar direction closest to the previous planar velocity
  auto planar_dir = [&](double u, double v) -> std::optional<Point2> {
    const DirectionSet d = asymptotic_directions(f, u, v, tol);
    if (d.degenerate || d.dirs.empty()) return std::nullopt;
    Point2 best{};
    double bd = -2.0;
    for (const auto& x : d.dirs) {
      for (double sg : {1.0, -1.0}) {
        const double dp = sg * (x[0] * prev_planar[0] + x[1] * prev_planar[1]);
        if (dp > bd) {
          bd = dp;
          best = {sg * x[0], sg * x[1]};
        }
      }
    }
    return best;
  };
  auto push = [&](const LiftedState& s) { tr.samples.push_back({s.u, s.v, s.slope, s.chart, len}); };
  auto finish = [&](Termination t) {
    tr.termination = t;
    return tr;
  };

  double h = 0.1 * hmax;
  bool planar = false;
  const double seed_angle = detail::direction_angle(st.slope, st.chart);
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (len >= max_len) return finish(Termination::max_length);
    if (near_degenerate(st)) return finish(Termination::hit_degenerate_point);

    if (planar) {
      // classical RK4 on the oriented planar direction field
      auto dir = [&](double u, double v) {
        auto d = planar_dir(u, v);
        if (!d) throw DomainError("no planar direction");
        return *d;
      };
      LiftedState next;
      try {
        const Point2 k1 = dir(st.u, st.v);
        const Point2 k2 = dir(st.u + 0.5 * hmax * k1[0], st.v + 0.5 * hmax * k1[1]);
        const Point2 k3 = dir(st.u + 0.5 * hmax * k2[0], st.v + 0.5 * hmax * k2[1]);
        const Point2 k4 = dir(st.u + hmax * k3[0], st.v + hmax * k3[1]);
        const double nu = st.u + hmax / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        const double nv = st.v + hmax / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        const Point2 dn = dir(nu, nv);
        next = lift_direction(nu, nv, dn);
        prev_planar = dn;
      } catch (const Error&) {
        return finish(Termination::hit_degenerate_point);
      }
      if (!region.contains(next.u, next.v)) {
        const double t = detail::exit_fraction(region, {st.u, st.v}, {next.u, next.v});
        next.u = st.u + t * (next.u - st.u);
        next.v = st.v + t * (next.v - st.v);
        len += t * hmax;
        push(next);
        return finish(Termination::left_domain);
      }
      len += hmax;
      st = next;
      push(st);
      if (stall_ratio_at(st) > opt.stall_ratio) {
        planar = false;
        const Vec3<double> X = lie_cartan(f, st);
        const double dp = X[0] * prev_planar[0] + X[1] * prev_planar[1];
        orient = dp >= 0 ? 1.0 : -1.0;
      }
      continue;
    }

    // one adaptive Dormand-Prince step in the current chart
    const detail::Y3 y{st.u, st.v, st.slope};
    const Chart chart = st.chart;
    detail::Y3 y5{}, k1s{}, k7{};
    double err = 0.0, ratio = -1.0;
    bool ok = true;
    try {
      using namespace detail;
      double r_;
      const Y3 k1 = lifted_rhs(y, chart, ratio);
      if (ratio < opt.stall_ratio) throw DomainError("stall");
      k1s = k1;
      const Y3 k2 = lifted_rhs(axpy(y, h * a21, k1), chart, r_);
      Y3 t3{};
      for (int i = 0; i < 3; ++i) t3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      const Y3 k3 = lifted_rhs(t3, chart, r_);
      Y3 t4{};
      for (int i = 0; i < 3; ++i) t4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      const Y3 k4 = lifted_rhs(t4, chart, r_);
      Y3 t5{};
      for (int i = 0; i < 3; ++i) t5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      const Y3 k5 = lifted_rhs(t5, chart, r_);
      Y3 t6{};
      for (int i = 0; i < 3; ++i) {
        t6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      }
      const Y3 k6 = lifted_rhs(t6, chart, r_);
      for (int i = 0; i < 3; ++i) y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = lifted_rhs(y5, chart, r_);
      for (int i = 0; i < 3; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      if (!std::isfinite(err)) ok = false;
    } catch (const Error&) {
      ok = false;
    }

    if (!ok) {
      if (ratio >= 0 && ratio < opt.stall_ratio) {
        // stalled: a short planar trial step decides between an isolated
        // equilibrium and a curve of equilibria
        const auto d = planar_dir(st.u, st.v);
        if (!d) return finish(Termination::hit_degenerate_point);
        const double ht = 1e-3 * hmax;
        const LiftedState trial = lift_direction(st.u + ht * (*d)[0], st.v + ht * (*d)[1], *d);
        double tr_ratio = 0.0;
        try {
          tr_ratio = stall_ratio_at(trial);
        } catch (const Error&) {
          return finish(Termination::hit_degenerate_point);
        }
        if (tr_ratio < opt.stall_ratio) {
          planar = true;
          tr.planar_fallback = true;
          prev_planar = *d;
          continue;
        }
        return finish(Termination::hit_degenerate_point);
      }
      h *= 0.25;
      if (h < hmin) return finish(Termination::hit_degenerate_point);
      continue;
    }

    const double fac = err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    if (err > 1.0) {
      h *= fac;
      if (h < hmin) return finish(Termination::hit_degenerate_point);
      continue;
    }

    LiftedState next{y5[0], y5[1], y5[2], chart};
    try {
      next = project(next);
    } catch (const Error&) {
    }
    const double hstep = h;
    h = std::min(hmax, h * fac);
    prev_planar = {k7[0], k7[1]};
    const double pn = std::hypot(prev_planar[0], prev_planar[1]);
    if (pn > 0) prev_planar = {prev_planar[0] / pn, prev_planar[1] / pn};

    if (!region.contains(next.u, next.v)) {
      const double t = detail::exit_fraction(region, {st.u, st.v}, {next.u, next.v});
      LiftedState clipped{st.u + t * (next.u - st.u), st.v + t * (next.v - st.v),
                          st.slope + t * (next.slope - st.slope), chart};
      clipped.u = std::clamp(clipped.u, region.u0, region.u1);
      clipped.v = std::clamp(clipped.v, region.v0, region.v1);
      clipped = project_slope(clipped);
      len += t * hstep;
      push(clipped);
      return finish(Termination::left_domain);
    }
    len += hstep;
    st = next;
    push(st);

    // closed loop: back over the seed with the same direction, judged on the
    // cubic Hermite interpolant of the step
    if (len > 10 * hmax) {
      const detail::Y3 y1{st.u, st.v, st.slope};
      auto hermite = [&](double t) {
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        detail::Y3 q{};
        for (int i = 0; i < 3; ++i) q[i] = h00 * y[i] + h10 * hstep * k1s[i] + h01 * y1[i] + h11 * hstep * k7[i];
        return q;
      };
      auto dist = [&](double t) {
        const detail::Y3 q = hermite(t);
        return std::hypot(q[0] - seed[0], q[1] - seed[1]);
      };
      int kb = 0;
      for (int k = 1; k <= 32; ++k) {
        if (dist(k / 32.0) < dist(kb / 32.0)) kb = k;
      }
      double lo = std::max(0.0, (kb - 1) / 32.0), hi = std::min(1.0, (kb + 1) / 32.0);
      for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (dist(m1) < dist(m2)) hi = m2; else lo = m1;
      }
      const double tb = 0.5 * (lo + hi), best = dist(tb), best_slope = hermite(tb)[2];
      const double da = detail::angle_mod_pi(detail::direction_angle(best_slope, chart) - seed_angle);
      if (best < opt.loop_tol && std::abs(da) < 1e-3) return finish(Termination::closed_loop);
    }

    const LiftedState sw = maybe_switch_chart(st);
    if (sw.chart != st.chart) {
      orient *= st.slope > 0 ? -1.0 : 1.0;
      st = sw;
    }
  }
  return finish(Termination::max_length);
}

/// Total change of the polar angle about `centre` along the trajectory,
/// in turns.
inline double winding_number(const Trajectory& t, Point2 centre) {
  double total = 0.0;
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    const double a0 = std::atan2(t.samples[k - 1].v - centre[1], t.samples[k - 1].u - centre[0]);
    const double a1 = std::atan2(t.samples[k].v - centre[1], t.samples[k].u - centre[0]);
    total += std::remainder(a1 - a0, 2 * std::numbers::pi);
  }
  return total / (2 * std::numbers::pi);
}

/// Length of the planar projection of a trajectory.
inline double planar_length(const Trajectory& t) {
  double len = 0.0;
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    len += std::hypot(t.samples[k].u - t.samples[k - 1].u, t.samples[k].v - t.samples[k - 1].v);
  }
  return len;
}

// ---------------------------------------------------------------------------
// Portraits

struct LabeledCurves {
  std::string label;
  std::vector<Polyline> lines;
};

struct PortraitOptions {
  int seeds_u = 8, seeds_v = 8;
  int trace_resolution = 256;
  int ring_seeds = 8;
  double ring_radius_fraction = 0.02;
  IntegrateOptions integrate;
  std::vector<Point2> extra_degenerate_points;
};

struct Portrait {
  std::string name;
  Region region;
  std::vector<LabeledCurves> curves;
  std::vector<SingularPointReport> points;
  std::vector<Trajectory> trajectories;
};

namespace detail {

struct Seed {
  Point2 p;
  int family, direction;
};

inline void add_seed_jobs(const BdeField& f, Point2 p, const Tolerances& tol, std::vector<Seed>& jobs) {
  DirectionSet d;
  try {
    d = asymptotic_directions(f, p[0], p[1], tol);
  } catch (const Error&) {
    return;
  }
  if (d.degenerate || d.dirs.empty() || d.double_root) return;
  for (int fam = 0; fam < 2; ++fam) {
    for (int dir : {1, -1}) jobs.push_back({p, fam, dir});
  }
}

inline std::vector<Point2> degenerate_candidates(const BdeField& f, const std::vector<Point2>& pts,
                                                 const Tolerances& tol) {
  std::vector<Point2> out;
  for (const Point2& p : pts) {
    if (!f.region().contains(p[0], p[1])) continue;
    try {
      if (norm(f.coeffs(p[0], p[1])) <= tol.degeneracy_eps) out.push_back(p);
    } catch (const Error&) {
    }
  }
  return out;
}

inline Portrait integrate_portrait(const BdeField& f, Portrait P, const PortraitOptions& opt, const Tolerances& tol,
                                   const std::vector<Point2>& degenerate) {
  const Region& r = f.region();
  std::vector<Seed> jobs;
  for (int j = 0; j < opt.seeds_v; ++j) {
    for (int i = 0; i < opt.seeds_u; ++i) {
      const Point2 p{r.u0 + r.width() * (i + 0.5) / opt.seeds_u, r.v0 + r.height() * (j + 0.5) / opt.seeds_v};
      add_seed_jobs(f, p, tol, jobs);
    }
  }
  const double rr = opt.ring_radius_fraction * r.diagonal();
  for (const auto& rep : P.points) {
    for (int k = 0; k < opt.ring_seeds; ++k) {
      const double t = 2 * std::numbers::pi * (k + 0.5) / opt.ring_seeds;
      const Point2 p{rep.u + rr * std::cos(t), rep.v + rr * std::sin(t)};
      if (r.contains(p[0], p[1])) add_seed_jobs(f, p, tol, jobs);
    }
  }
  IntegrateOptions io = opt.integrate;
  io.degenerate_points.insert(io.degenerate_points.end(), degenerate.begin(), degenerate.end());
  auto results = parallel_map<std::optional<Trajectory>>(jobs.size(), [&](std::size_t k) -> std::optional<Trajectory> {
    try {
      return integrate_asymptotic(f, jobs[k].p, jobs[k].family, jobs[k].direction, io, tol);
    } catch (const Error&) {
      return std::nullopt;
    }
  });
  for (auto& t : results) {
    if (t && t->samples.size() >= 2) P.trajectories.push_back(std::move(*t));
  }
  return P;
}

}  // namespace detail

/// Portrait of a synthetic field: discriminant curves, classified folded
/// points, classified totally degenerate points from `extra_degenerate_points`,
/// and trajectories from a seed grid and rings around the singular points.
inline Portrait build_portrait(const BdeField& f, const PortraitOptions& opt = {}, const Tolerances& tol = {}) {
  Portrait P;
  P.name = f.name();
  P.region = f.region();
  const int res = opt.trace_resolution;
  P.curves.push_back(
      {"discriminant", trace_zero_set([&](double u, double v) { return discriminant(f, u, v); }, f.region(), res, res, tol)});
  const auto degenerate = detail::degenerate_candidates(f, opt.extra_degenerate_points, tol);
  if (f.has_jets()) {
    for (const Point2& p : find_folded_points(f, P.curves[0].lines)) {
      bool skip = false;
      for (const Point2& q : degenerate) skip = skip || std::hypot(p[0] - q[0], p[1] - q[1]) < 1e-6;
      if (skip) continue;
      try {
        P.points.push_back(classify_folded(f, p, tol));
      } catch (const Error&) {
      }
    }
    for (const Point2& p : degenerate) {
      try {
        P.points.push_back(classify_flat_affine_umbilic(f, p, tol));
      } catch (const Error&) {
        SingularPointReport r;
        r.u = p[0];
        r.v = p[1];
        r.kind = SingularKind::flat_affine_umbilic;
        P.points.push_back(r);
      }
    }
  }
  sort_reports(P.points);
  return detail::integrate_portrait(f, std::move(P), opt, tol, degenerate);
}

/// Portrait of a surface: Euclidean and affine parabolic curves, cusps of
/// Gauss, catalog singular points and affine asymptotic lines.
inline Portrait build_portrait(const SurfaceDef& def, const Region& region, const PortraitOptions& opt = {},
                               const Tolerances& tol = {}) {
  region.validate();
  const BdeField f = surface_bde_field(def, region, tol);
  Portrait P;
  P.name = def.kind == SurfaceKind::catalog ? to_string(def.catalog) : "surface";
  P.region = region;
  const int res = opt.trace_resolution;
  P.curves.push_back({"parabolic", trace_zero_set(euclid_parabolic_function(def), region, res, res, tol)});
  P.curves.push_back({"affine_parabolic", trace_zero_set(affine_parabolic_function(f), region, res, res, tol)});
  P.points = detect_special_points(def, region, tol, {res});
  std::vector<Point2> cands = opt.extra_degenerate_points;
  if (def.kind == SurfaceKind::catalog &&
      (def.catalog == CatalogId::pick || def.catalog == CatalogId::flat_umbilic_chart)) {
    cands.push_back({0.0, 0.0});
  }
  const auto degenerate = detail::degenerate_candidates(f, cands, tol);
  for (const Point2& p : degenerate) {
    SingularPointReport r;
    if (def.kind == SurfaceKind::catalog && def.catalog == CatalogId::flat_umbilic_chart) {
      try {
        r = classify_flat_euclid_umbilic(def, p, tol);
      } catch (const Error&) {
        r.u = p[0];
        r.v = p[1];
        r.kind = SingularKind::flat_affine_umbilic;
      }
    } else {
      try {
        r = classify_flat_affine_umbilic(f, p, tol);
      } catch (const Error&) {
        r.u = p[0];
        r.v = p[1];
        r.kind = SingularKind::flat_affine_umbilic;
      }
    }
    P.points.push_back(r);
  }
  sort_reports(P.points);
  return detail::integrate_portrait(f, std::move(P), opt, tol, degenerate);
}

}  // namespace affasym
