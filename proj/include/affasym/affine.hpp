#pragma once

// Pointwise Euclidean and Blaschke invariants, the closed-form Monge third
// form and the extended (parabolic-regular) asymptotic BDE coefficients.

#include <cmath>
#include <string>

#include "affasym/error.hpp"
#include "affasym/jets.hpp"
#include "affasym/surface.hpp"
#include "affasym/tolerances.hpp"
#include "affasym/vec3.hpp"

namespace affasym {

enum class CurvatureClass { elliptic, parabolic, hyperbolic };

inline const char* to_string(CurvatureClass c) {
  switch (c) {
    case CurvatureClass::elliptic: return "elliptic";
    case CurvatureClass::parabolic: return "parabolic";
    case CurvatureClass::hyperbolic: return "hyperbolic";
  }
  return "?";
}

inline CurvatureClass classify_sign(double x, double tol) {
  if (x > tol) return CurvatureClass::elliptic;
  if (x < -tol) return CurvatureClass::hyperbolic;
  return CurvatureClass::parabolic;
}

struct AffinePointData {
  double u = 0.0, v = 0.0;
  Vec3<double> alpha{}, alpha_u{}, alpha_v{};
  double E = 0.0, F = 0.0, G = 0.0;
  double Ldet = 0.0, Mdet = 0.0, Ndet = 0.0;  // determinants |a_u, a_v, a_ij|
  double K = 0.0;
  CurvatureClass euclid_class = CurvatureClass::parabolic;

  bool has_frame = false;
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  Vec3<double> nu{}, nu_u{}, nu_v{};
  Vec3<double> xi{}, xi_u{}, xi_v{};

  bool has_third_form = false;
  double l = 0.0, m = 0.0, n = 0.0;
  double b11 = 0.0, b12 = 0.0, b21 = 0.0, b22 = 0.0;
  double K_aff = 0.0, H_aff = 0.0;
  CurvatureClass aff_class = CurvatureClass::parabolic;
};

namespace detail {

template <int M, int N>
Vec3<Jet<M>> vpartial(const Vec3<Jet<N>>& a, int i, int j) {
  return {a[0].template partial<M>(i, j), a[1].template partial<M>(i, j), a[2].template partial<M>(i, j)};
}

inline Vec3<double> values(const Vec3<double>& a) { return a; }
template <int N>
Vec3<double> values(const Vec3<Jet<N>>& a) {
  return {a[0].value(), a[1].value(), a[2].value()};
}

}  // namespace detail

/// Jets of the conormal, affine normal and third form built from position jets
/// of order N. Orders drop by 2, 3 and 4 respectively.
template <int N>
struct BlaschkeJets {
  static_assert(N >= 4);
  Jet<N - 2> L, M, Nn, D;
  Vec3<Jet<N - 2>> nu;
  Jet<N - 2> g11, g12, g22;
  Vec3<Jet<N - 3>> xi;
  Jet<N - 4> l, m, n;
};

/// The sign of D = LN - M^2 at the base point is folded into xi so that
/// <nu, xi> = 1 in both elliptic and hyperbolic regions.
template <int N>
BlaschkeJets<N> blaschke_jets(const Vec3<Jet<N>>& a, double eps = kDefaultDegeneracyEps) {
  using detail::vpartial;
  BlaschkeJets<N> r;
  const auto au = vpartial<N - 2>(a, 1, 0), av = vpartial<N - 2>(a, 0, 1);
  const auto w = cross(au, av);
  r.L = dot(w, vpartial<N - 2>(a, 2, 0));
  r.M = dot(w, vpartial<N - 2>(a, 1, 1));
  r.Nn = dot(w, vpartial<N - 2>(a, 0, 2));
  r.D = r.L * r.Nn - r.M * r.M;
  if (!(std::abs(r.D.value()) > eps)) throw DomainError("parabolic point: LN - M^2 vanishes");
  const double s = r.D.value() > 0 ? 1.0 : -1.0;
  const Jet<N - 2> f = abs_pow(r.D, -0.25, eps);
  r.nu = scale(f, w);
  r.g11 = r.L * f;
  r.g12 = r.M * f;
  r.g22 = r.Nn * f;
  const auto nu_u = vpartial<N - 3>(r.nu, 1, 0), nu_v = vpartial<N - 3>(r.nu, 0, 1);
  r.xi = scale(s * f.template truncate<N - 3>(), cross(nu_u, nu_v));
  const auto xi_u = vpartial<N - 4>(r.xi, 1, 0), xi_v = vpartial<N - 4>(r.xi, 0, 1);
  const auto nu_u4 = vpartial<N - 4>(r.nu, 1, 0), nu_v4 = vpartial<N - 4>(r.nu, 0, 1);
  r.l = dot(nu_u4, xi_u);
  r.m = dot(nu_u4, xi_v);
  r.n = dot(nu_v4, xi_v);
  return r;
}

/// First form, determinant second form coefficients and Gaussian curvature.
template <int N>
AffinePointData euclidean_data(const Vec3<Jet<N>>& a, const Tolerances& tol = {}) {
  static_assert(N >= 2);
  using detail::values;
  using detail::vpartial;
  AffinePointData d;
  d.alpha = values(a);
  d.alpha_u = values(vpartial<0>(a, 1, 0));
  d.alpha_v = values(vpartial<0>(a, 0, 1));
  const Vec3<double> w = cross(d.alpha_u, d.alpha_v);
  if (norm(w) < 1e-10) throw DomainError("degenerate immersion: a_u and a_v are parallel");
  d.E = dot(d.alpha_u, d.alpha_u);
  d.F = dot(d.alpha_u, d.alpha_v);
  d.G = dot(d.alpha_v, d.alpha_v);
  d.Ldet = dot(w, values(vpartial<0>(a, 2, 0)));
  d.Mdet = dot(w, values(vpartial<0>(a, 1, 1)));
  d.Ndet = dot(w, values(vpartial<0>(a, 0, 2)));
  const double eg = d.E * d.G - d.F * d.F;
  d.K = (d.Ldet * d.Ndet - d.Mdet * d.Mdet) / (eg * eg);
  d.euclid_class = classify_sign(d.K, tol.k_zero_tol);
  return d;
}

/// Fills l, m, n from the frame derivatives, then b_ij from the tangential
/// decomposition xi_u = b11 a_u + b21 a_v, xi_v = b12 a_u + b22 a_v.
inline void third_form_and_shape(AffinePointData& d, const Tolerances& tol = {}) {
  if (!d.has_frame) throw PreconditionError("frame fields missing");
  d.l = dot(d.nu_u, d.xi_u);
  d.m = dot(d.nu_u, d.xi_v);
  d.n = dot(d.nu_v, d.xi_v);
  const double det = d.E * d.G - d.F * d.F;
  auto decompose = [&](const Vec3<double>& x, double& bu, double& bv) {
    const double pu = dot(x, d.alpha_u), pv = dot(x, d.alpha_v);
    bu = (d.G * pu - d.F * pv) / det;
    bv = (d.E * pv - d.F * pu) / det;
  };
  decompose(d.xi_u, d.b11, d.b21);
  decompose(d.xi_v, d.b12, d.b22);
  const double gdet = d.g11 * d.g22 - d.g12 * d.g12;
  d.K_aff = (d.l * d.n - d.m * d.m) / gdet;
  d.H_aff = (d.l * d.g22 - 2.0 * d.m * d.g12 + d.n * d.g11) / gdet;
  d.aff_class = classify_sign(d.K_aff, tol.k_zero_tol);
  d.has_third_form = true;
}

/// Euclidean data plus the Blaschke frame and third form at (u, v).
inline AffinePointData blaschke_conormal_frame(const SurfaceDef& def, double u, double v,
                                               const Tolerances& tol = {}) {
  using detail::values;
  using detail::vpartial;
  if (def.domain.in_excluded_band(u, v)) throw DomainError("point inside an excluded parabolic band");
  const auto a = eval_surface_jets<4>(def, u, v);
  AffinePointData d = euclidean_data(a, tol);
  d.u = u;
  d.v = v;
  const double D = d.Ldet * d.Ndet - d.Mdet * d.Mdet;
  if (!(std::abs(D) > tol.degeneracy_eps) || d.euclid_class == CurvatureClass::parabolic) {
    throw DomainError("parabolic point at (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  const BlaschkeJets<4> bj = blaschke_jets(a, tol.degeneracy_eps);
  d.g11 = bj.g11.value();
  d.g12 = bj.g12.value();
  d.g22 = bj.g22.value();
  d.nu = values(bj.nu);
  d.nu_u = values(vpartial<0>(bj.nu, 1, 0));
  d.nu_v = values(vpartial<0>(bj.nu, 0, 1));
  d.xi = values(bj.xi);
  d.xi_u = values(vpartial<0>(bj.xi, 1, 0));
  d.xi_v = values(vpartial<0>(bj.xi, 0, 1));
  d.has_frame = true;
  third_form_and_shape(d, tol);
  return d;
}

/// III_aff(w) / I_aff(w) for the tangent vector w = a a_u + b a_v.
inline double affine_normal_curvature(const AffinePointData& d, double a, double b) {
  if (!d.has_third_form) throw PreconditionError("third form missing");
  const double den = d.g11 * a * a + 2.0 * d.g12 * a * b + d.g22 * b * b;
  const double scale2 = (std::abs(d.g11) + std::abs(d.g12) + std::abs(d.g22)) * (a * a + b * b);
  if (!(std::abs(den) > 1e-12 * scale2)) throw DomainError("null direction of the Blaschke metric");
  return (d.l * a * a + 2.0 * d.m * a * b + d.n * b * b) / den;
}

/// Height partials h_ij, 2 <= i + j <= 4, in a common scalar type.
template <typename T>
struct HeightPartials {
  T uu, uv, vv;
  T uuu, uuv, uvv, vvv;
  T uuuu, uuuv, uuvv, uvvv, vvvv;
};

template <int N>
HeightPartials<Jet<N - 4>> height_partials(const Jet<N>& h) {
  auto p = [&](int i, int j) { return h.template partial<N - 4>(i, j); };
  return {p(2, 0), p(1, 1), p(0, 2), p(3, 0), p(2, 1), p(1, 2), p(0, 3),
          p(4, 0), p(3, 1), p(2, 2), p(1, 3), p(0, 4)};
}

/// Polynomial numerators (A, B, C) = 16 H^2 (l, m, n), H = h_uu h_vv - h_uv^2,
/// of the Monge third form. Defined across the parabolic set.
template <typename T>
Vec3<T> monge_extended_numerators(const HeightPartials<T>& d) {
  const T& huu = d.uu;
  const T& huv = d.uv;
  const T& hvv = d.vv;
  const T& huuu = d.uuu;
  const T& huuv = d.uuv;
  const T& huvv = d.uvv;
  const T& hvvv = d.vvv;
  const T H = huu * hvv - huv * huv;
  const T Pl = -4.0 * (hvv * d.uuuu - 2.0 * huv * d.uuuv) * H - 4.0 * huu * H * d.uuvv +
               7.0 * hvv * hvv * huuu * huuu + 3.0 * huu * huu * huvv * huvv +
               (-28.0 * huuv * huv * hvv + 2.0 * (huu * hvv + 8.0 * huv * huv) * huvv - 4.0 * hvvv * huu * huv) * huuu +
               12.0 * (huu * hvv + huv * huv) * huuv * huuv +
               4.0 * (huu * huu * hvvv - 6.0 * huu * huv * huvv) * huuv;
  const T Pm = -4.0 * (hvv * d.uuuv - 2.0 * huv * d.uuvv) * H +
               (7.0 * hvv * hvv * huuv - 10.0 * huv * hvv * huvv + (-1.0 * huu * hvv + 4.0 * huv * huv) * hvvv) * huuu -
               4.0 * huu * H * d.uvvv - 18.0 * huuv * huuv * huv * hvv + 7.0 * huvv * hvvv * huu * huu +
               ((15.0 * huu * hvv + 24.0 * huv * huv) * huvv - 10.0 * huu * huv * hvvv) * huuv -
               18.0 * huvv * huvv * huu * huv;
  const T Pn = -4.0 * (hvv * d.uuvv - 2.0 * huv * d.uvvv) * H - 4.0 * huu * d.vvvv * H +
               4.0 * (-1.0 * huv * hvv * hvvv + huvv * hvv * hvv) * huuu + 3.0 * huuv * huuv * hvv * hvv +
               2.0 * (-12.0 * huv * hvv * huvv + (huu * hvv + 8.0 * huv * huv) * hvvv) * huuv +
               12.0 * (huu * hvv + huv * huv) * huvv * huvv - 28.0 * huvv * hvvv * huu * huv +
               7.0 * hvvv * hvvv * huu * huu;
  return {-1.0 * Pl, -1.0 * Pm, -1.0 * Pn};
}

/// Extended BDE coefficients of a graph from a height jet of order N; the
/// result carries jets of order N - 4.
template <int N>
Vec3<Jet<N - 4>> extended_bde_coeffs(const Jet<N>& h) {
  return monge_extended_numerators(height_partials(h));
}

inline Vec3<double> extended_bde_values(const Jet<4>& h) {
  const auto c = extended_bde_coeffs(h);
  return {c[0].value(), c[1].value(), c[2].value()};
}

/// (l, m, n) of a graph from the closed-form expressions.
inline Vec3<double> monge_lmn_closed_form(const Jet<4>& h, double eps = kDefaultDegeneracyEps) {
  const double H = h(2, 0) * h(0, 2) - h(1, 1) * h(1, 1);
  if (!(std::abs(H) > eps)) throw DomainError("parabolic point: h_uu h_vv - h_uv^2 vanishes");
  const Vec3<double> P = extended_bde_values(h);
  return scale(1.0 / (16.0 * H * H), P);
}

/// Closed-form extended coefficients (l, m, n) of the torus of revolution as
/// functions of u; generic in the scalar type so jets in u can be pushed through.
template <typename T>
Vec3<T> torus_extended_bde(double R, double r, const T& u) {
  using std::cos;
  if (!(r > 0.0 && r < R)) throw ConfigError("torus: need 0 < r < R");
  const T c = cos(u);
  const T c2 = c * c;
  const T lbar = (15.0 * c2 - 3.0) * (R * R) + (4.0 * r * R) * c * (9.0 * c2 - 2.0) + (16.0 * r * r) * c2 * c2;
  const T nbar = 4.0 * c2 * ((3.0 * c2 + 1.0) * R + (4.0 * r) * c2 * c) * (R + r * c);
  return {lbar, T(0.0), nbar};
}

/// 16 D^2 (l, m, n) from the general pipeline, D = LN - M^2 of the
/// parametrization, as jets of order N - 4.
template <int N>
Vec3<Jet<N - 4>> pipeline_extended_jets(const SurfaceDef& def, double u, double v, const Tolerances& tol = {}) {
  const auto a = eval_surface_jets<N>(def, u, v);
  const BlaschkeJets<N> bj = blaschke_jets(a, tol.degeneracy_eps);
  const Jet<N - 4> D = bj.D.template truncate<N - 4>();
  const Jet<N - 4> f = 16.0 * D * D;
  return {f * bj.l, f * bj.m, f * bj.n};
}

inline Vec3<double> pipeline_extended_coeffs(const SurfaceDef& def, double u, double v, const Tolerances& tol = {}) {
  const auto c = pipeline_extended_jets<4>(def, u, v, tol);
  return {c[0].value(), c[1].value(), c[2].value()};
}

}  // namespace affasym
