#pragma once

// Binary differential equations A du^2 + 2B du dv + C dv^2 = 0 and their
// Lie-Cartan lift to the surface M = {F = 0} in (u, v, slope) space.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/Polynomials>

#include "affasym/affine.hpp"
#include "affasym/error.hpp"
#include "affasym/jets.hpp"
#include "affasym/region.hpp"
#include "affasym/surface.hpp"
#include "affasym/tolerances.hpp"
#include "affasym/vec3.hpp"

namespace affasym {

/// P: slope p = dv/du. Q: slope q = du/dv.
enum class Chart { P, Q };

inline const char* to_string(Chart c) { return c == Chart::P ? "P" : "Q"; }

struct LiftedState {
  double u = 0.0, v = 0.0, slope = 0.0;
  Chart chart = Chart::P;
};

/// Coefficients (A, B, C) over a planar region with optional first and second
/// order jets.
class BdeField {
 public:
  using ValueFn = std::function<Vec3<double>(double, double)>;
  using Jet1Fn = std::function<Vec3<Jet<1>>(double, double)>;
  using Jet2Fn = std::function<Vec3<Jet<2>>(double, double)>;

  BdeField() = default;
  BdeField(std::string name, Region region, ValueFn value, Jet1Fn jet1 = {}, Jet2Fn jet2 = {})
      : name_(std::move(name)), region_(region), value_(std::move(value)), jet1_(std::move(jet1)),
        jet2_(std::move(jet2)) {}

  const std::string& name() const { return name_; }
  const Region& region() const { return region_; }
  void set_region(const Region& r) { region_ = r; }
  bool has_jets() const { return static_cast<bool>(jet1_) && static_cast<bool>(jet2_); }

  Vec3<double> coeffs(double u, double v) const { return value_(u, v); }

  Vec3<Jet<1>> coeffs_jet1(double u, double v) const {
    if (!jet1_) throw PreconditionError("field '" + name_ + "' has no coefficient jets");
    return jet1_(u, v);
  }

  Vec3<Jet<2>> coeffs_jet2(double u, double v) const {
    if (!jet2_) throw PreconditionError("field '" + name_ + "' has no coefficient jets");
    return jet2_(u, v);
  }

 private:
  std::string name_;
  Region region_;
  ValueFn value_;
  Jet1Fn jet1_;
  Jet2Fn jet2_;
};

/// Field from a generic callable g(T u, T v) -> Vec3<T>, instantiated for
/// doubles and first and second order jets.
template <typename G>
BdeField make_generic_field(std::string name, Region region, G g) {
  return BdeField(
      std::move(name), region, [g](double u, double v) { return g(u, v); },
      [g](double u, double v) { return g(Jet<1>::seed(Var::u, u), Jet<1>::seed(Var::v, v)); },
      [g](double u, double v) { return g(Jet<2>::seed(Var::u, u), Jet<2>::seed(Var::v, v)); });
}

/// (-v + lambda u^2, 0, 1), optionally multiplied by 1 + u^2 + v^2.
inline BdeField folded_model_field(double lambda, bool positive_factor = false, Region region = {-1, 1, -1, 1}) {
  return make_generic_field("folded(" + std::to_string(lambda) + ")", region, [=](auto u, auto v) {
    using T = decltype(u);
    const T f = positive_factor ? T(1.0) + u * u + v * v : T(1.0);
    return Vec3<T>{f * (lambda * (u * u) - v), T(0.0), f};
  });
}

/// (-e1 v, -e1 u, v): F = -e1 v - 2 e1 u p + v p^2.
inline BdeField morse_model_field(int eps1, Region region = {-1, 1, -1, 1}) {
  if (eps1 != 1 && eps1 != -1) throw ConfigError("eps1 must be +1 or -1");
  const double e = eps1;
  return make_generic_field("morse(" + std::to_string(eps1) + ")", region, [=](auto u, auto v) {
    using T = decltype(u);
    return Vec3<T>{-e * v, -e * u, T(1.0) * v};
  });
}

namespace detail {

template <int N>
Vec3<double> vvalues(const Vec3<Jet<N>>& a) {
  return {a[0].value(), a[1].value(), a[2].value()};
}

template <int N>
Vec3<Jet<N>> height_field_jets(const SurfaceDef& def, double u, double v) {
  return extended_bde_coeffs(height_jet<N + 4>(def, u, v));
}

template <int N>
Vec3<Jet<N>> torus_field_jets(const TorusParams& p, double u) {
  return torus_extended_bde(p.R, p.r, Jet<N>::seed(Var::u, u));
}

}  // namespace detail

/// Affine asymptotic BDE of a surface: the extended coefficients for graphs
/// and the torus, the cleared general pipeline for other parametrizations.
inline BdeField surface_bde_field(const SurfaceDef& def, Region region, const Tolerances& tol = {}) {
  if (def.is_graph()) {
    return BdeField(
        "affine-asymptotic", region,
        [def](double u, double v) { return detail::vvalues(detail::height_field_jets<0>(def, u, v)); },
        [def](double u, double v) { return detail::height_field_jets<1>(def, u, v); },
        [def](double u, double v) { return detail::height_field_jets<2>(def, u, v); });
  }
  if (def.is_torus()) {
    const TorusParams p = def.torus;
    return BdeField(
        "affine-asymptotic", region, [p](double u, double) { return torus_extended_bde(p.R, p.r, u); },
        [p](double u, double) { return detail::torus_field_jets<1>(p, u); },
        [p](double u, double) { return detail::torus_field_jets<2>(p, u); });
  }
  return BdeField(
      "affine-asymptotic", region,
      [def, tol](double u, double v) { return pipeline_extended_coeffs(def, u, v, tol); },
      [def, tol](double u, double v) { return pipeline_extended_jets<5>(def, u, v, tol); },
      [def, tol](double u, double v) { return pipeline_extended_jets<6>(def, u, v, tol); });
}

inline double discriminant(const Vec3<double>& c) { return c[1] * c[1] - c[0] * c[2]; }
inline double discriminant(const BdeField& f, double u, double v) { return discriminant(f.coeffs(u, v)); }

struct DirectionSet {
  bool degenerate = false;   // A = B = C = 0
  bool double_root = false;  // single direction of multiplicity 2
  std::vector<std::array<double, 2>> dirs;  // unit (du, dv)
};

inline std::array<double, 2> unit2(double a, double b) {
  const double n = std::hypot(a, b);
  return {a / n, b / n};
}

/// Real roots of A du^2 + 2B du dv + C dv^2 = 0 as unit directions, "plus"
/// root first.
inline DirectionSet asymptotic_directions(const Vec3<double>& c, const Tolerances& tol = {}) {
  DirectionSet out;
  const double A = c[0], B = c[1], C = c[2];
  const double mx = std::max({std::abs(A), std::abs(B), std::abs(C)});
  if (!(mx > tol.degeneracy_eps)) {
    out.degenerate = true;
    return out;
  }
  const double delta = B * B - A * C;
  if (std::abs(delta) < tol.lift_tol * tol.lift_tol * mx * mx) {
    out.double_root = true;
    if (std::abs(C) >= std::abs(A)) {
      out.dirs.push_back(unit2(1.0, -B / C));
    } else {
      out.dirs.push_back(unit2(-B / A, 1.0));
    }
    return out;
  }
  if (delta < 0) return out;
  const double sq = std::sqrt(delta);
  if (A == 0.0 && C == 0.0) {
    out.dirs = {{1.0, 0.0}, {0.0, 1.0}};
    return out;
  }
  if (std::abs(C) >= std::abs(A)) {
    out.dirs.push_back(unit2(C, -B + sq));
    out.dirs.push_back(unit2(C, -B - sq));
  } else {
    out.dirs.push_back(unit2(-B + sq, A));
    out.dirs.push_back(unit2(-B - sq, A));
  }
  return out;
}

inline DirectionSet asymptotic_directions(const BdeField& f, double u, double v, const Tolerances& tol = {}) {
  return asymptotic_directions(f.coeffs(u, v), tol);
}

/// F in the chart of the state: C p^2 + 2B p + A (P) or A q^2 + 2B q + C (Q).
inline double lifted_residual(const Vec3<double>& c, const LiftedState& s) {
  const double x = s.slope;
  return s.chart == Chart::P ? c[0] + 2 * c[1] * x + c[2] * x * x : c[2] + 2 * c[1] * x + c[0] * x * x;
}

/// |F| divided by |(A, B, C)| (1 + slope^2).
inline double normalized_residual(const Vec3<double>& c, const LiftedState& s) {
  const double sc = norm(c) * (1.0 + s.slope * s.slope);
  return sc > 0 ? std::abs(lifted_residual(c, s)) / sc : 0.0;
}

template <int N>
Jet<N> swap_vars(const Jet<N>& a) {
  std::array<double, Jet<N>::kSize> out{};
  for (int d = 0; d <= N; ++d) {
    for (int j = 0; j <= d; ++j) out[Jet<N>::index(d - j, j)] = a(j, d - j);
  }
  return Jet<N>::from_partials(out);
}

/// Coefficients seen from the chart: in Q the roles of (u, v) and of A, C swap.
template <int N>
Vec3<Jet<N>> chart_coeffs(const Vec3<Jet<N>>& c, Chart chart) {
  if (chart == Chart::P) return c;
  return {swap_vars(c[2]), swap_vars(c[1]), swap_vars(c[0])};
}

enum class LieCartanVariant {
  standard,  // third component -(F_x + s F_y)
  printed,   // third component -(F_x + s F_s)
};

inline Vec3<double> chart_to_uv(const Vec3<double>& x, Chart chart) {
  return chart == Chart::P ? x : Vec3<double>{x[1], x[0], x[2]};
}

/// Lie-Cartan field in (u, v, slope) coordinates for the state's chart.
inline Vec3<double> lie_cartan(const Vec3<Jet<1>>& jets_uv, const LiftedState& st,
                               LieCartanVariant variant = LieCartanVariant::standard) {
  const auto c = chart_coeffs(jets_uv, st.chart);
  const double s = st.slope;
  const double B = c[1].value(), C = c[2].value();
  const double Fs = 2 * B + 2 * C * s;
  const double Fx = c[0](1, 0) + 2 * c[1](1, 0) * s + c[2](1, 0) * s * s;
  const double Fy = c[0](0, 1) + 2 * c[1](0, 1) * s + c[2](0, 1) * s * s;
  const double third = variant == LieCartanVariant::standard ? -(Fx + s * Fy) : -(Fx + s * Fs);
  return chart_to_uv({Fs, s * Fs, third}, st.chart);
}

inline Vec3<double> lie_cartan(const BdeField& f, const LiftedState& st,
                               LieCartanVariant variant = LieCartanVariant::standard) {
  return lie_cartan(f.coeffs_jet1(st.u, st.v), st, variant);
}

/// Gradient (F_u, F_v, F_slope) of the chart function at the state.
inline Vec3<double> lifted_gradient(const Vec3<Jet<1>>& jets_uv, const LiftedState& st) {
  const auto c = chart_coeffs(jets_uv, st.chart);
  const double s = st.slope;
  const double Fs = 2 * c[1].value() + 2 * c[2].value() * s;
  const double Fx = c[0](1, 0) + 2 * c[1](1, 0) * s + c[2](1, 0) * s * s;
  const double Fy = c[0](0, 1) + 2 * c[1](0, 1) * s + c[2](0, 1) * s * s;
  return chart_to_uv({Fx, Fy, Fs}, st.chart);
}

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Jacobian of the Lie-Cartan field in chart coordinates (x, y, s), where
/// (x, y) = (u, v) in P and (v, u) in Q.
inline Mat3 lie_cartan_jacobian(const Vec3<Jet<2>>& jets_uv, const LiftedState& st,
                                LieCartanVariant variant = LieCartanVariant::standard) {
  const auto c = chart_coeffs(jets_uv, st.chart);
  const double s = st.slope;
  auto q = [&](int i, int j) { return c[0](i, j) + 2 * c[1](i, j) * s + c[2](i, j) * s * s; };  // d^{i+j}F
  auto qs = [&](int i, int j) { return 2 * c[1](i, j) + 2 * c[2](i, j) * s; };                  // d^{i+j}F_s
  const double Fs = qs(0, 0), Fss = 2 * c[2].value();
  Mat3 J{};
  J[0] = {qs(1, 0), qs(0, 1), Fss};
  J[1] = {s * qs(1, 0), s * qs(0, 1), Fs + s * Fss};
  if (variant == LieCartanVariant::standard) {
    J[2] = {-(q(2, 0) + s * q(1, 1)), -(q(1, 1) + s * q(0, 2)), -(qs(1, 0) + q(0, 1) + s * qs(0, 1))};
  } else {
    J[2] = {-(q(2, 0) + s * qs(1, 0)), -(q(1, 1) + s * qs(0, 1)), -(qs(1, 0) + Fs + s * Fss)};
  }
  return J;
}

struct Linearization {
  std::array<std::array<double, 2>, 2> restricted{};
  std::complex<double> mu1, mu2;  // eigenvalues of the restriction to T M, mu1 has the larger real part
  double trace = 0.0, det = 0.0;
  Vec3<double> velocity{};        // (u, v, slope) order
};

/// Linearization of the lifted field restricted to the tangent plane of M.
/// The field is tangent to M, so the Jacobian maps into the plane orthogonal
/// to grad F at a zero of the field.
inline Linearization linearize(const BdeField& f, const LiftedState& st,
                               LieCartanVariant variant = LieCartanVariant::standard) {
  const auto j2 = f.coeffs_jet2(st.u, st.v);
  const Mat3 J = lie_cartan_jacobian(j2, st, variant);
  const auto c = chart_coeffs(j2, st.chart);
  const double s = st.slope;
  Vec3<double> g{c[0](1, 0) + 2 * c[1](1, 0) * s + c[2](1, 0) * s * s,
                 c[0](0, 1) + 2 * c[1](0, 1) * s + c[2](0, 1) * s * s, 2 * c[1].value() + 2 * c[2].value() * s};
  const double gn = norm(g);
  if (!(gn > 0.0)) throw DomainError("lifted surface is singular at the state");
  g = scale(1.0 / gn, g);
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(g[i]) < std::abs(g[k])) k = i;
  }
  Vec3<double> axis{};
  axis[k] = 1.0;
  Vec3<double> e1 = cross(g, axis);
  e1 = scale(1.0 / norm(e1), e1);
  const Vec3<double> e2 = cross(g, e1);
  auto apply = [&](const Vec3<double>& x) {
    Vec3<double> y{};
    for (int r = 0; r < 3; ++r) y[r] = J[r][0] * x[0] + J[r][1] * x[1] + J[r][2] * x[2];
    return y;
  };
  const Vec3<double> Je1 = apply(e1), Je2 = apply(e2);
  Linearization out;
  out.restricted = {{{dot(e1, Je1), dot(e1, Je2)}, {dot(e2, Je1), dot(e2, Je2)}}};
  out.trace = out.restricted[0][0] + out.restricted[1][1];
  out.det = out.restricted[0][0] * out.restricted[1][1] - out.restricted[0][1] * out.restricted[1][0];
  const std::complex<double> disc = std::sqrt(std::complex<double>(out.trace * out.trace - 4 * out.det));
  out.mu1 = 0.5 * (out.trace + disc);
  out.mu2 = 0.5 * (out.trace - disc);
  if (out.mu2.real() > out.mu1.real()) std::swap(out.mu1, out.mu2);
  Vec3<Jet<1>> j1;
  for (int i = 0; i < 3; ++i) j1[i] = j2[i].truncate<1>();
  out.velocity = lie_cartan(j1, st, variant);
  return out;
}

/// Real roots of sum coeffs[k] x^k, leading near-zero coefficients dropped.
inline std::vector<double> real_polynomial_roots(std::vector<double> coeffs, double rel_eps = 1e-12) {
  double mx = 0.0;
  for (double c : coeffs) mx = std::max(mx, std::abs(c));
  if (mx == 0.0) return {};
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= rel_eps * mx) coeffs.pop_back();
  std::vector<double> roots;
  if (coeffs.size() < 2) return roots;
  if (coeffs.size() == 2) {
    roots.push_back(-coeffs[0] / coeffs[1]);
    return roots;
  }
  Eigen::VectorXd p(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t k = 0; k < coeffs.size(); ++k) p[static_cast<Eigen::Index>(k)] = coeffs[k];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(p);
  solver.realRoots(roots, 1e-8 * mx);
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Zeros of the lifted field over a totally degenerate point (A = B = C = 0),
/// i.e. roots of F_x + s F_y = 0. Slopes with |p| <= 1 are reported in P, the
/// rest in Q.
inline std::vector<LiftedState> degenerate_point_lifts(const BdeField& f, double u, double v) {
  const auto j1 = f.coeffs_jet1(u, v);
  std::vector<LiftedState> out;
  for (Chart chart : {Chart::P, Chart::Q}) {
    const auto c = chart_coeffs(j1, chart);
    const std::vector<double> cubic = {c[0](1, 0), 2 * c[1](1, 0) + c[0](0, 1), c[2](1, 0) + 2 * c[1](0, 1),
                                       c[2](0, 1)};
    for (double s : real_polynomial_roots(cubic)) {
      if (chart == Chart::P ? std::abs(s) <= 1.0 : std::abs(s) < 1.0) out.push_back({u, v, s, chart});
    }
  }
  std::sort(out.begin(), out.end(), [](const LiftedState& a, const LiftedState& b) {
    auto key = [](const LiftedState& x) { return x.chart == Chart::P ? x.slope : (x.slope == 0 ? 1e300 : 1.0 / x.slope); };
    return key(a) < key(b);
  });
  return out;
}

/// Slope in P of a state (infinite for a vertical Q state).
inline double slope_p(const LiftedState& s) {
  if (s.chart == Chart::P) return s.slope;
  return s.slope == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / s.slope;
}

/// Lifted state over (u, v) for a direction (du, dv), in the better conditioned chart.
inline LiftedState lift_direction(double u, double v, const std::array<double, 2>& d) {
  if (std::abs(d[0]) >= std::abs(d[1])) return {u, v, d[1] / d[0], Chart::P};
  return {u, v, d[0] / d[1], Chart::Q};
}

/// Moves a state to the other chart when its slope leaves the hysteresis
/// band: P to Q above |p| = 1.5, Q back to P once |p| < 0.75.
inline LiftedState maybe_switch_chart(const LiftedState& s, double p_out = 1.5, double p_back = 0.75) {
  const double limit = s.chart == Chart::P ? p_out : 1.0 / p_back;
  if (std::abs(s.slope) > limit) return {s.u, s.v, 1.0 / s.slope, s.chart == Chart::P ? Chart::Q : Chart::P};
  return s;
}

}  // namespace affasym
