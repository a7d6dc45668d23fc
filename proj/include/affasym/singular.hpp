#pragma once

// Singular points of the asymptotic net: folded singularities on the
// discriminant, Morse-type totally degenerate points, cusps of Gauss and flat
// Euclidean umbilics.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affasym/affine.hpp"
#include "affasym/bde.hpp"
#include "affasym/error.hpp"
#include "affasym/region.hpp"
#include "affasym/surface.hpp"
#include "affasym/tolerances.hpp"
#include "affasym/trace.hpp"

namespace affasym {

enum class SingularKind {
  folded_saddle,
  folded_node,
  folded_focus,
  morse_isolated,
  morse_crossing,
  cusp_of_gauss,
  affine_cusp_of_gauss,
  flat_affine_umbilic,
  flat_euclid_umbilic_no_lines,
  flat_euclid_umbilic_focus,
  boundary_uncertain,
};

inline const char* to_string(SingularKind k) {
  switch (k) {
    case SingularKind::folded_saddle: return "folded_saddle";
    case SingularKind::folded_node: return "folded_node";
    case SingularKind::folded_focus: return "folded_focus";
    case SingularKind::morse_isolated: return "morse_isolated";
    case SingularKind::morse_crossing: return "morse_crossing";
    case SingularKind::cusp_of_gauss: return "cusp_of_gauss";
    case SingularKind::affine_cusp_of_gauss: return "affine_cusp_of_gauss";
    case SingularKind::flat_affine_umbilic: return "flat_affine_umbilic";
    case SingularKind::flat_euclid_umbilic_no_lines: return "flat_euclid_umbilic_no_lines";
    case SingularKind::flat_euclid_umbilic_focus: return "flat_euclid_umbilic_focus";
    case SingularKind::boundary_uncertain: return "boundary_uncertain";
  }
  return "?";
}

struct SingularPointReport {
  double u = 0.0, v = 0.0;
  SingularKind kind = SingularKind::boundary_uncertain;
  std::optional<double> lambda;
  std::vector<std::complex<double>> eigenvalues;
  std::optional<double> tangency_angle;
  std::optional<int> hessian_signature;  // eps1 = +1 definite, -1 indefinite
  std::vector<LiftedState> lifts;
  std::map<std::string, double> metrics;
};

/// Sorted by (u, v, kind) for reproducible output.
inline void sort_reports(std::vector<SingularPointReport>& r) {
  std::sort(r.begin(), r.end(), [](const SingularPointReport& a, const SingularPointReport& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
}

// ---------------------------------------------------------------------------
// Tangency of the double-root direction of a quadratic form to its own zero set

/// A quadratic form (a, b, c) with first-order jets; the double-root
/// direction at a point of {b^2 - ac = 0} and the sine of its angle with the
/// tangent of that curve.
struct TangencyProbe {
  double delta = 0.0;
  Point2 grad{};       // gradient of delta
  Point2 direction{};  // double-root direction, unit
  double sine = 0.0;   // signed sin of the angle between direction and the curve tangent
};

inline TangencyProbe tangency_probe(const Vec3<Jet<1>>& c) {
  TangencyProbe t;
  const double A = c[0].value(), B = c[1].value(), C = c[2].value();
  t.delta = B * B - A * C;
  for (int k = 0; k < 2; ++k) {
    const int i = k == 0 ? 1 : 0, j = k == 0 ? 0 : 1;
    t.grad[k] = 2 * B * c[1](i, j) - c[0](i, j) * C - A * c[2](i, j);
  }
  t.direction = std::abs(C) >= std::abs(A) ? unit2(C, -B) : unit2(-B, A);
  const double gn = std::hypot(t.grad[0], t.grad[1]);
  t.sine = gn > 0 ? (t.grad[0] * t.direction[0] + t.grad[1] * t.direction[1]) / gn : 0.0;
  return t;
}

/// Euclidean second fundamental form (L, M, N) determinants as first-order jets.
inline Vec3<Jet<1>> euclid_form_jets(const SurfaceDef& def, double u, double v) {
  const auto a = eval_surface_jets<3>(def, u, v);
  using detail::vpartial;
  const auto w = cross(vpartial<1>(a, 1, 0), vpartial<1>(a, 0, 1));
  return {dot(w, vpartial<1>(a, 2, 0)), dot(w, vpartial<1>(a, 1, 1)), dot(w, vpartial<1>(a, 0, 2))};
}

namespace detail {

using JetForm = std::function<Vec3<Jet<1>>(double, double)>;

/// Newton on (delta, grad delta . d) with a finite-difference Jacobian; the
/// double-root formula used for d is frozen at the start point.
inline std::optional<Point2> refine_tangency(const JetForm& form, Point2 x, double scale) {
  const Vec3<Jet<1>> c0 = form(x[0], x[1]);
  const bool use_c = std::abs(c0[2].value()) >= std::abs(c0[0].value());
  auto F = [&](double u, double v) {
    const Vec3<Jet<1>> c = form(u, v);
    const double A = c[0].value(), B = c[1].value(), C = c[2].value();
    const double gu = 2 * B * c[1](1, 0) - c[0](1, 0) * C - A * c[2](1, 0);
    const double gv = 2 * B * c[1](0, 1) - c[0](0, 1) * C - A * c[2](0, 1);
    const double du = use_c ? C : -B, dv = use_c ? -B : A;
    return Point2{B * B - A * C, gu * du + gv * dv};
  };
  const double h = 1e-7 * scale;
  for (int it = 0; it < 40; ++it) {
    const Point2 f = F(x[0], x[1]);
    const Point2 fu = F(x[0] + h, x[1]), fd = F(x[0] - h, x[1]);
    const Point2 gu = F(x[0], x[1] + h), gd = F(x[0], x[1] - h);
    const double j00 = (fu[0] - fd[0]) / (2 * h), j10 = (fu[1] - fd[1]) / (2 * h);
    const double j01 = (gu[0] - gd[0]) / (2 * h), j11 = (gu[1] - gd[1]) / (2 * h);
    const double det = j00 * j11 - j01 * j10;
    if (!(std::abs(det) > 0)) return std::nullopt;
    const double su = (j11 * f[0] - j01 * f[1]) / det, sv = (-j10 * f[0] + j00 * f[1]) / det;
    x = {x[0] - su, x[1] - sv};
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) return std::nullopt;
    if (std::hypot(su, sv) < 1e-14 * scale) return x;
  }
  return x;
}

/// Points of the polylines where the signed tangency sine changes sign,
/// refined to the exact tangency. Directions are kept continuous along each
/// polyline before comparing signs.
inline std::vector<Point2> tangency_sign_changes(const JetForm& form, const std::vector<Polyline>& lines,
                                                 const Region& region) {
  std::vector<Point2> out;
  const double scale = region.diagonal();
  for (const Polyline& pl : lines) {
    const std::size_t n = pl.pts.size() - (pl.closed ? 1 : 0);
    if (n < 3) continue;
    std::vector<double> sines(n);
    Point2 prev_dir{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      const Point2& p = pl.pts[k];
      TangencyProbe t;
      try {
        t = tangency_probe(form(p[0], p[1]));
      } catch (const Error&) {
        sines[k] = std::nan("");
        continue;
      }
      if (t.direction[0] * prev_dir[0] + t.direction[1] * prev_dir[1] < 0) {
        t.direction = {-t.direction[0], -t.direction[1]};
        t.sine = -t.sine;
      }
      prev_dir = t.direction;
      // orient the sine by the polyline's own tangent so that a smooth
      // traversal gives a continuous signal
      const Point2& a = pl.pts[k == 0 ? (pl.closed ? n - 1 : 0) : k - 1];
      const Point2& b = pl.pts[k + 1 < pl.pts.size() ? k + 1 : k];
      const double tu = b[0] - a[0], tv = b[1] - a[1];
      const double cr = tu * t.direction[1] - tv * t.direction[0];
      sines[k] = std::copysign(std::abs(t.sine), cr);
    }
    // a curve that is itself an integral curve has no isolated tangencies
    double smax = 0.0;
    for (double x : sines) {
      if (!std::isnan(x)) smax = std::max(smax, std::abs(x));
    }
    if (smax < 1e-8) continue;
    const std::size_t m = pl.closed ? n : n - 1;
    for (std::size_t k = 0; k < m; ++k) {
      const double s0 = sines[k], s1 = sines[(k + 1) % n];
      if (std::isnan(s0) || std::isnan(s1) || (s0 > 0) == (s1 > 0)) continue;
      const double w = s0 / (s0 - s1);
      const Point2& a = pl.pts[k];
      const Point2& b = pl.pts[(k + 1) % n];
      Point2 guess{a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])};
      std::optional<Point2> r;
      try {
        r = refine_tangency(form, guess, scale);
      } catch (const Error&) {
        r = std::nullopt;
      }
      const double step = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (r && std::hypot((*r)[0] - guess[0], (*r)[1] - guess[1]) <= 2 * step + 1e-12 && region.contains((*r)[0], (*r)[1])) {
        // the double-root direction is undefined where the whole form vanishes
        const Vec3<Jet<1>> c = form((*r)[0], (*r)[1]);
        double val = 0.0, der = 0.0;
        for (const auto& x : c) {
          val += std::abs(x.value());
          der += std::abs(x(1, 0)) + std::abs(x(0, 1));
        }
        if (val > 1e-8 * der * scale) out.push_back(*r);
      }
    }
  }
  // merge duplicates found from neighbouring segments
  std::vector<Point2> merged;
  for (const Point2& p : out) {
    bool dup = false;
    for (const Point2& q : merged) dup = dup || std::hypot(p[0] - q[0], p[1] - q[1]) < 1e-6 * scale;
    if (!dup) merged.push_back(p);
  }
  std::sort(merged.begin(), merged.end());
  return merged;
}

}  // namespace detail

/// Folded candidates: points of the discriminant curves where the double-root
/// direction is tangent to the curve (where the lifted field vanishes).
inline std::vector<Point2> find_folded_points(const BdeField& f, const std::vector<Polyline>& discriminant_lines) {
  return detail::tangency_sign_changes([&](double u, double v) { return f.coeffs_jet1(u, v); }, discriminant_lines,
                                       f.region());
}

/// Lifted state over a point of the discriminant.
inline LiftedState criminant_lift(const Vec3<double>& c, double u, double v) {
  if (std::abs(c[2]) >= std::abs(c[0])) return {u, v, -c[1] / c[2], Chart::P};
  return {u, v, -c[1] / c[0], Chart::Q};
}

inline SingularKind folded_kind(double lambda, double tol) {
  if (lambda < -tol) return SingularKind::folded_saddle;
  if (lambda > tol && lambda < 1.0 / 16 - tol) return SingularKind::folded_node;
  if (lambda > 1.0 / 16 + tol) return SingularKind::folded_focus;
  return SingularKind::boundary_uncertain;
}

/// Classifies a folded singularity by the linearization of the lifted field:
/// with trace normalised to 1, the eigenvalues are (1 +- sqrt(1 - 16 lambda))/2,
/// so lambda = det / (4 trace^2).
inline SingularPointReport classify_folded(const BdeField& f, Point2 p, const Tolerances& tol = {},
                                           LieCartanVariant variant = LieCartanVariant::standard) {
  const Vec3<double> c = f.coeffs(p[0], p[1]);
  const LiftedState st = criminant_lift(c, p[0], p[1]);
  const Linearization lin = linearize(f, st, variant);
  const auto j1 = f.coeffs_jet1(p[0], p[1]);
  double scale = 0.0;
  for (const auto& x : j1) scale += std::abs(x.value()) + std::abs(x(1, 0)) + std::abs(x(0, 1));
  if (norm(lin.velocity) > 1e-6 * scale * (1 + st.slope * st.slope)) {
    throw PreconditionError("not a singular lift: lifted field does not vanish over the point");
  }
  if (!(std::abs(lin.trace) > 0)) throw DomainError("folded point with zero trace");
  SingularPointReport r;
  r.u = p[0];
  r.v = p[1];
  r.lambda = lin.det / (4 * lin.trace * lin.trace);
  r.kind = folded_kind(*r.lambda, tol.classify_tol);
  r.eigenvalues = {lin.mu1, lin.mu2};
  r.lifts = {st};
  r.metrics["trace"] = lin.trace;
  return r;
}

/// Morse classification of a totally degenerate point from the Hessian of
/// delta, with the lifted singularities over it and their eigenvalues.
inline SingularPointReport classify_flat_affine_umbilic(const BdeField& f, Point2 p, const Tolerances& tol = {}) {
  const Vec3<Jet<2>> c = f.coeffs_jet2(p[0], p[1]);
  double dscale = 0.0;
  for (const auto& x : c) dscale = std::max({dscale, std::abs(x(1, 0)), std::abs(x(0, 1))});
  for (const auto& x : c) {
    if (std::abs(x.value()) > std::max(tol.degeneracy_eps, 1e-9 * dscale)) {
      throw PreconditionError("not a totally degenerate point");
    }
  }
  // Hessian of B^2 - AC where A = B = C = 0
  auto d = [&](int k, int i) { return i == 0 ? c[k](1, 0) : c[k](0, 1); };
  double Hs[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) Hs[i][j] = 2 * d(1, i) * d(1, j) - d(0, i) * d(2, j) - d(0, j) * d(2, i);
  }
  const double det = Hs[0][0] * Hs[1][1] - Hs[0][1] * Hs[1][0];
  const double sc = std::abs(Hs[0][0]) + std::abs(Hs[1][1]) + 2 * std::abs(Hs[0][1]);
  if (!(std::abs(det) > 1e-10 * sc * sc)) throw DomainError("degenerate Hessian of the discriminant");
  SingularPointReport r;
  r.u = p[0];
  r.v = p[1];
  r.hessian_signature = det > 0 ? 1 : -1;
  r.kind = det > 0 ? SingularKind::morse_isolated : SingularKind::morse_crossing;
  r.metrics["hessian_det"] = det;
  r.lifts = degenerate_point_lifts(f, p[0], p[1]);
  for (const LiftedState& s : r.lifts) {
    const Linearization lin = linearize(f, s);
    r.eigenvalues.push_back(lin.mu1);
    r.eigenvalues.push_back(lin.mu2);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Surface-level detection

struct SpecialPointOptions {
  int resolution = 256;
};

/// Scalar fields whose zero sets are the Euclidean and affine parabolic curves.
inline ScalarFn euclid_parabolic_function(const SurfaceDef& def) {
  return [def](double u, double v) {
    const auto c = euclid_form_jets(def, u, v);
    return c[0].value() * c[2].value() - c[1].value() * c[1].value();
  };
}

inline ScalarFn affine_parabolic_function(const BdeField& f) {
  return [f](double u, double v) { return -discriminant(f, u, v); };
}

/// Cusps of Gauss (Euclidean asymptotic direction tangent to the parabolic
/// curve) and affine cusps of Gauss (affine asymptotic direction tangent to
/// the affine parabolic curve), with the measured tangency angles.
inline std::vector<SingularPointReport> detect_special_points(const SurfaceDef& def, const Region& region,
                                                              const Tolerances& tol = {},
                                                              SpecialPointOptions opt = {}) {
  std::vector<SingularPointReport> out;
  const BdeField field = surface_bde_field(def, region, tol);
  struct Family {
    SingularKind kind;
    ScalarFn scalar;
    detail::JetForm form;
  };
  const Family fams[2] = {
      {SingularKind::cusp_of_gauss, euclid_parabolic_function(def),
       [&def](double u, double v) { return euclid_form_jets(def, u, v); }},
      {SingularKind::affine_cusp_of_gauss, affine_parabolic_function(field),
       [&field](double u, double v) { return field.coeffs_jet1(u, v); }},
  };
  for (const Family& fam : fams) {
    const auto lines = trace_zero_set(fam.scalar, region, opt.resolution, opt.resolution, tol);
    for (const Point2& p : detail::tangency_sign_changes(fam.form, lines, region)) {
      const TangencyProbe t = tangency_probe(fam.form(p[0], p[1]));
      const double angle = std::asin(std::min(1.0, std::abs(t.sine)));
      if (angle >= tol.angle_tol) continue;
      SingularPointReport r;
      r.u = p[0];
      r.v = p[1];
      r.kind = fam.kind;
      r.tangency_angle = angle;
      if (fam.kind == SingularKind::affine_cusp_of_gauss && field.has_jets()) {
        try {
          const SingularPointReport fr = classify_folded(field, p, tol);
          r.lambda = fr.lambda;
          r.eigenvalues = fr.eigenvalues;
          r.lifts = fr.lifts;
        } catch (const Error&) {
        }
      }
      out.push_back(r);
    }
  }
  sort_reports(out);
  return out;
}

/// Minimum over a polyline set of the angle between the affine asymptotic
/// double-root direction and the curve, skipping vertices within `exclude`
/// of the given points.
inline double min_tangency_angle(const BdeField& f, const std::vector<Polyline>& lines,
                                 const std::vector<Point2>& excluded = {}, double exclude = 0.0) {
  double best = std::numbers::pi / 2;
  for (const Polyline& pl : lines) {
    for (const Point2& p : pl.pts) {
      bool skip = false;
      for (const Point2& q : excluded) skip = skip || std::hypot(p[0] - q[0], p[1] - q[1]) < exclude;
      if (skip) continue;
      const TangencyProbe t = tangency_probe(f.coeffs_jet1(p[0], p[1]));
      best = std::min(best, std::asin(std::min(1.0, std::abs(t.sine))));
    }
  }
  return best;
}

/// Least-squares fit v = c0 + c1 u + ... + c4 u^4 to the polyline vertices
/// with |u - u0| <= window; returns (c0, c1, c2) relative to u0.
inline std::array<double, 3> fit_quadratic_coefficients(const std::vector<Polyline>& lines, Point2 origin,
                                                        double window) {
  std::vector<Point2> pts;
  for (const Polyline& pl : lines) {
    for (const Point2& p : pl.pts) {
      if (std::abs(p[0] - origin[0]) <= window && std::abs(p[1] - origin[1]) <= window) {
        pts.push_back({p[0] - origin[0], p[1] - origin[1]});
      }
    }
  }
  if (pts.size() < 6) throw DomainError("too few curve points for a contact fit");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), 5);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double pw = 1.0;
    for (int j = 0; j < 5; ++j) {
      X(static_cast<Eigen::Index>(k), j) = pw;
      pw *= pts[k][0] / window;
    }
    y[static_cast<Eigen::Index>(k)] = pts[k][1];
  }
  const Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
  return {c[0], c[1] / window, c[2] / (window * window)};
}

struct ContactReport {
  std::array<double, 3> parabolic{};         // v = c0 + c1 u + c2 u^2 + ...
  std::array<double, 3> affine_parabolic{};
  int contact_order = 0;                      // 2: common point and tangent, different curvature
};

/// Contact of the Euclidean and affine parabolic curves at a point where they
/// meet, from polynomial fits over a square window.
inline ContactReport measure_parabolic_contact(const SurfaceDef& def, Point2 at, double window = 0.05,
                                               int resolution = 256, const Tolerances& tol = {}) {
  const Region r{at[0] - window, at[0] + window, at[1] - window, at[1] + window};
  const BdeField field = surface_bde_field(def, r, tol);
  ContactReport c;
  c.parabolic = fit_quadratic_coefficients(trace_zero_set(euclid_parabolic_function(def), r, resolution, resolution, tol),
                                           at, window);
  c.affine_parabolic = fit_quadratic_coefficients(
      trace_zero_set(affine_parabolic_function(field), r, resolution, resolution, tol), at, window);
  const double s = 1e-6 * window;
  const bool meet = std::abs(c.parabolic[0] - c.affine_parabolic[0]) < s;
  const bool tangent = std::abs(c.parabolic[1] - c.affine_parabolic[1]) < 1e-4;
  if (meet) c.contact_order = tangent ? (std::abs(c.parabolic[2] - c.affine_parabolic[2]) > 1e-3 ? 2 : 3) : 1;
  return c;
}

/// Flat Euclidean umbilic (vanishing 1- and 2-jet of the height): the cubic
/// part with three real line factors gives a focus, one real factor gives no
/// asymptotic lines. The blown-up coefficients are sampled on a small circle:
/// for the focus, Abar > 0 and Cbar < 0 for all angles, so each family has
/// one-signed radial and angular components.
inline SingularPointReport classify_flat_euclid_umbilic(const SurfaceDef& def, Point2 p, const Tolerances& tol = {},
                                                        double radius = 1e-3, int samples = 720) {
  const Jet2 h = height_jet(def, p[0], p[1]);
  double sc = 0.0;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; i + j <= 4; ++j) sc = std::max(sc, std::abs(h(i, j)));
  }
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; i + j <= 2; ++j) {
      if (i + j >= 1 && std::abs(h(i, j)) > 1e-9 * std::max(1.0, sc)) throw PreconditionError("not a flat umbilic point");
    }
  }
  // binary cubic a u^3 + b u^2 v + c u v^2 + d v^3
  const double a = h(3, 0) / 6, b = h(2, 1) / 2, c = h(1, 2) / 2, d = h(0, 3) / 6;
  const double disc = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
  SingularPointReport r;
  r.u = p[0];
  r.v = p[1];
  r.metrics["cubic_discriminant"] = disc;
  const double cscale = std::pow(std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d), 4);
  if (!(std::abs(disc) > 1e-12 * cscale)) throw DomainError("cubic part has a repeated factor");
  const BdeField f = surface_bde_field(def, {p[0] - 1, p[0] + 1, p[1] - 1, p[1] + 1}, tol);
  double amin = 1e300, amax = -1e300, cmin = 1e300, cmax = -1e300, dmax = -1e300;
  for (int k = 0; k < samples; ++k) {
    const double t = 2 * std::numbers::pi * k / samples, ct = std::cos(t), st = std::sin(t);
    const Vec3<double> q = f.coeffs(p[0] + radius * ct, p[1] + radius * st);
    const double n = radius * radius;
    const double Ab = (q[0] * ct * ct + 2 * q[1] * ct * st + q[2] * st * st) / n;
    const double Cb = (q[0] * st * st - 2 * q[1] * ct * st + q[2] * ct * ct) / n;
    amin = std::min(amin, Ab);
    amax = std::max(amax, Ab);
    cmin = std::min(cmin, Cb);
    cmax = std::max(cmax, Cb);
    dmax = std::max(dmax, discriminant(q) / (n * n));
  }
  const double ref = std::max({std::abs(amin), std::abs(amax), std::abs(cmin), std::abs(cmax)});
  r.metrics["blowup_Abar_min"] = amin / ref;
  r.metrics["blowup_Abar_max"] = amax / ref;
  r.metrics["blowup_Cbar_min"] = cmin / ref;
  r.metrics["blowup_Cbar_max"] = cmax / ref;
  r.metrics["delta_max_on_circle"] = dmax;
  if (disc > 0) {
    r.kind = (amin > 0 && cmax < 0) || (amax < 0 && cmin > 0) ? SingularKind::flat_euclid_umbilic_focus
                                                             : SingularKind::boundary_uncertain;
  } else {
    r.kind = dmax <= 1e-9 * ref * ref ? SingularKind::flat_euclid_umbilic_no_lines : SingularKind::boundary_uncertain;
  }
  return r;
}

}  // namespace affasym
