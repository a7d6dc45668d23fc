#pragma once

// Surface definitions: Monge graphs z = h(u, v), parametric triples, and the
// polynomial normal-form charts and torus of the catalog.

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "affasym/error.hpp"
#include "affasym/expr.hpp"
#include "affasym/jets.hpp"
#include "affasym/vec3.hpp"

namespace affasym {

/// Bivariate polynomial as a list of monomials c u^i v^j.
class Polynomial2 {
 public:
  struct Term {
    int i;
    int j;
    double c;
  };

  void add(int i, int j, double c) {
    if (c == 0.0) return;
    for (Term& t : terms_) {
      if (t.i == i && t.j == j) {
        t.c += c;
        return;
      }
    }
    terms_.push_back({i, j, c});
  }

  const std::vector<Term>& terms() const { return terms_; }

  double coeff(int i, int j) const {
    for (const Term& t : terms_) {
      if (t.i == i && t.j == j) return t.c;
    }
    return 0.0;
  }

  template <typename T>
  T eval(const T& u, const T& v) const {
    T r(0.0);
    for (const Term& t : terms_) r = r + t.c * (int_pow(u, t.i) * int_pow(v, t.j));
    return r;
  }

  /// Exact d^{a+b}/du^a dv^b at (u, v) by differentiating monomials directly.
  double partial(int a, int b, double u, double v) const {
    double r = 0.0;
    for (const Term& t : terms_) {
      if (t.i < a || t.j < b) continue;
      double c = t.c;
      for (int k = 0; k < a; ++k) c *= (t.i - k);
      for (int k = 0; k < b; ++k) c *= (t.j - k);
      r += c * std::pow(u, t.i - a) * std::pow(v, t.j - b);
    }
    return r;
  }

 private:
  std::vector<Term> terms_;
};

using CoeffMap = std::map<std::pair<int, int>, double>;

struct PickParams {
  int epsilon = 1;
  double sigma = 0.0;
  CoeffMap q;  // 4 <= i + j <= 7
};

struct CuspGaussParams {
  CoeffMap q;  // q21, q03 and 4 <= i + j <= 6
};

struct FlatUmbilicParams {
  int epsilon = 1;
  double k = 3.0;  // coefficient of epsilon u v^2
  CoeffMap q;      // 4 <= i + j <= 5
};

struct TorusParams {
  double R = 3.0;
  double r = 1.0;
};

enum class SurfaceKind { monge, parametric, catalog };
enum class CatalogId { pick, cusp_gauss, flat_umbilic_chart, torus };

inline const char* to_string(CatalogId id) {
  switch (id) {
    case CatalogId::pick: return "pick";
    case CatalogId::cusp_gauss: return "cusp_gauss";
    case CatalogId::flat_umbilic_chart: return "flat_umbilic_chart";
    case CatalogId::torus: return "torus";
  }
  return "?";
}

inline CatalogId catalog_id_from_string(const std::string& s) {
  for (CatalogId id : {CatalogId::pick, CatalogId::cusp_gauss, CatalogId::flat_umbilic_chart, CatalogId::torus}) {
    if (s == to_string(id)) return id;
  }
  throw ConfigError("unknown catalog surface '" + s + "'");
}

/// Open strip |w - center - k period| < half_width in one parameter.
struct Band {
  Var var = Var::u;
  double center = 0.0;
  double half_width = 0.0;
  double period = 0.0;  // 0: not periodic

  bool contains(double u, double v) const {
    double w = (var == Var::u ? u : v) - center;
    if (period > 0.0) w -= period * std::round(w / period);
    return std::abs(w) < half_width;
  }
};

struct Domain {
  double u0 = -std::numeric_limits<double>::infinity();
  double u1 = std::numeric_limits<double>::infinity();
  double v0 = -std::numeric_limits<double>::infinity();
  double v1 = std::numeric_limits<double>::infinity();
  std::vector<Band> excluded;

  bool contains(double u, double v) const { return u >= u0 && u <= u1 && v >= v0 && v <= v1; }
  bool in_excluded_band(double u, double v) const {
    for (const Band& b : excluded) {
      if (b.contains(u, v)) return true;
    }
    return false;
  }
};

struct SurfaceDef {
  SurfaceKind kind = SurfaceKind::monge;
  Expr height;                  // monge
  std::array<Expr, 3> xyz;      // parametric
  CatalogId catalog = CatalogId::pick;
  PickParams pick;
  CuspGaussParams cusp;
  FlatUmbilicParams umbilic;
  TorusParams torus;
  Polynomial2 poly;             // height of polynomial catalog charts
  Domain domain;

  /// True when the surface is a graph (u, v, h(u, v)).
  bool is_graph() const {
    return kind == SurfaceKind::monge || (kind == SurfaceKind::catalog && catalog != CatalogId::torus);
  }
  bool is_torus() const { return kind == SurfaceKind::catalog && catalog == CatalogId::torus; }
};

inline SurfaceDef monge_surface(const std::string& h) {
  SurfaceDef s;
  s.kind = SurfaceKind::monge;
  s.height = parse_expression(h);
  return s;
}

inline SurfaceDef parametric_surface(const std::string& x, const std::string& y, const std::string& z) {
  SurfaceDef s;
  s.kind = SurfaceKind::parametric;
  s.xyz = {parse_expression(x), parse_expression(y), parse_expression(z)};
  return s;
}

namespace detail {

inline double coeff_or_zero(const CoeffMap& q, int i, int j) {
  auto it = q.find({i, j});
  return it == q.end() ? 0.0 : it->second;
}

inline void check_degrees(const CoeffMap& q, int lo, int hi, const char* what) {
  for (const auto& [ij, c] : q) {
    const int d = ij.first + ij.second;
    if (ij.first < 0 || ij.second < 0 || d < lo || d > hi) {
      throw ConfigError(std::string(what) + ": coefficient q" + std::to_string(ij.first) +
                        std::to_string(ij.second) + " outside the chart's degree range");
    }
  }
}

inline void check_epsilon(int eps) {
  if (eps != 1 && eps != -1) throw ConfigError("epsilon must be +1 or -1");
}

}  // namespace detail

inline SurfaceDef pick_surface(const PickParams& p) {
  detail::check_epsilon(p.epsilon);
  detail::check_degrees(p.q, 4, 7, "pick");
  SurfaceDef s;
  s.kind = SurfaceKind::catalog;
  s.catalog = CatalogId::pick;
  s.pick = p;
  const double e = p.epsilon;
  s.poly.add(2, 0, 0.5);
  s.poly.add(0, 2, 0.5 * e);
  s.poly.add(3, 0, p.sigma / 6.0);
  s.poly.add(1, 2, -3.0 * e * p.sigma / 6.0);
  for (int d = 4; d <= 7; ++d) {
    for (int j = 0; j <= d; ++j) {
      const double c = detail::coeff_or_zero(p.q, d - j, j);
      s.poly.add(d - j, j, c * detail::binomial(d, j) / detail::factorial(d));
    }
  }
  return s;
}

inline SurfaceDef cusp_gauss_surface(const CuspGaussParams& p) {
  for (const auto& [ij, c] : p.q) {
    const int d = ij.first + ij.second;
    const bool cubic = (ij == std::pair{2, 1} || ij == std::pair{0, 3});
    if (!cubic && (d < 4 || d > 6)) {
      throw ConfigError("cusp_gauss: coefficient q" + std::to_string(ij.first) + std::to_string(ij.second) +
                        " is not part of the chart");
    }
  }
  const double q21 = detail::coeff_or_zero(p.q, 2, 1), q40 = detail::coeff_or_zero(p.q, 4, 0);
  if (q21 * q21 - 4.0 * q40 == 0.0) throw ConfigError("cusp_gauss: q21^2 - 4 q40 must be nonzero");
  SurfaceDef s;
  s.kind = SurfaceKind::catalog;
  s.catalog = CatalogId::cusp_gauss;
  s.cusp = p;
  s.poly.add(0, 2, 1.0);
  for (const auto& [ij, c] : p.q) s.poly.add(ij.first, ij.second, c);
  return s;
}

inline SurfaceDef flat_umbilic_surface(const FlatUmbilicParams& p) {
  detail::check_epsilon(p.epsilon);
  detail::check_degrees(p.q, 4, 5, "flat_umbilic_chart");
  if (p.k == 0.0) throw ConfigError("flat_umbilic_chart: k must be nonzero");
  SurfaceDef s;
  s.kind = SurfaceKind::catalog;
  s.catalog = CatalogId::flat_umbilic_chart;
  s.umbilic = p;
  s.poly.add(3, 0, 1.0);
  s.poly.add(1, 2, p.k * p.epsilon);
  for (const auto& [ij, c] : p.q) s.poly.add(ij.first, ij.second, c);
  return s;
}

/// Torus ((R + r cos u) cos v, (R + r cos u) sin v, r sin u), with bands of
/// half-width guard excluded around the parabolic circles u = pi/2, 3pi/2.
inline SurfaceDef torus_surface(const TorusParams& p, double guard = 1e-3) {
  if (!(p.r > 0.0 && p.r < p.R)) throw ConfigError("torus: need 0 < r < R");
  SurfaceDef s;
  s.kind = SurfaceKind::catalog;
  s.catalog = CatalogId::torus;
  s.torus = p;
  s.domain.excluded.push_back({Var::u, std::numbers::pi / 2, guard, std::numbers::pi});
  return s;
}

/// Position of the surface at a (u, v) given as generic scalars (double or jets).
template <typename T>
Vec3<T> surface_position(const SurfaceDef& def, const T& u, const T& v) {
  using std::cos;
  using std::sin;
  switch (def.kind) {
    case SurfaceKind::monge: return {u, v, def.height.eval(u, v)};
    case SurfaceKind::parametric: return {def.xyz[0].eval(u, v), def.xyz[1].eval(u, v), def.xyz[2].eval(u, v)};
    case SurfaceKind::catalog:
      if (def.catalog == CatalogId::torus) {
        const T rho = def.torus.R + def.torus.r * cos(u);
        return {rho * cos(v), rho * sin(v), def.torus.r * sin(u)};
      }
      return {u, v, def.poly.eval(u, v)};
  }
  return {u, v, T(0.0)};
}

/// Jets of the three position components at (u, v).
template <int N = 4>
Vec3<Jet<N>> eval_surface_jets(const SurfaceDef& def, double u, double v) {
  if (!def.domain.contains(u, v)) throw DomainError("point outside surface domain");
  return surface_position(def, Jet<N>::seed(Var::u, u), Jet<N>::seed(Var::v, v));
}

/// Jet of the height function of a graph surface.
template <int N = 4>
Jet<N> height_jet(const SurfaceDef& def, double u, double v) {
  if (!def.is_graph()) throw PreconditionError("surface is not a Monge graph");
  return eval_surface_jets<N>(def, u, v)[2];
}

}  // namespace affasym
