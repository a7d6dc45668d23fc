#pragma once

// The conormal map as a surface: its second fundamental form against the
// affine third form, meshes of its image and OBJ export.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "affasym/affine.hpp"
#include "affasym/bde.hpp"
#include "affasym/error.hpp"
#include "affasym/parallel.hpp"
#include "affasym/region.hpp"
#include "affasym/surface.hpp"
#include "affasym/tolerances.hpp"
#include "affasym/trace.hpp"

namespace affasym {

/// Conormal nu as a K-jet.
template <int K>
Vec3<Jet<K>> conormal_jets(const SurfaceDef& def, double u, double v, const Tolerances& tol = {}) {
  if (def.domain.in_excluded_band(u, v)) throw DomainError("point lies in an excluded parabolic band");
  using detail::vpartial;
  const auto a = eval_surface_jets<K + 2>(def, u, v);
  const auto w = cross(vpartial<K>(a, 1, 0), vpartial<K>(a, 0, 1));
  const Jet<K> L = dot(w, vpartial<K>(a, 2, 0)), M = dot(w, vpartial<K>(a, 1, 1)), N = dot(w, vpartial<K>(a, 0, 2));
  const Jet<K> D = L * N - M * M;
  if (!(std::abs(D.value()) > tol.degeneracy_eps)) throw DomainError("parabolic point: LN - M^2 vanishes");
  return scale(abs_pow(D, -0.25, tol.degeneracy_eps), w);
}

/// Second fundamental form of the conormal surface with the unnormalised
/// normal nu_u x nu_v, as K-jets.
template <int K>
Vec3<Jet<K>> conormal_form_jets(const SurfaceDef& def, double u, double v, const Tolerances& tol = {}) {
  using detail::vpartial;
  const Vec3<Jet<K + 2>> n = conormal_jets<K + 2>(def, u, v, tol);
  const auto w = cross(vpartial<K>(n, 1, 0), vpartial<K>(n, 0, 1));
  return {dot(w, vpartial<K>(n, 2, 0)), dot(w, vpartial<K>(n, 1, 1)), dot(w, vpartial<K>(n, 0, 2))};
}

/// Euclidean asymptotic BDE of the conormal surface in the parameters of S.
inline BdeField conormal_asymptotic_field(const SurfaceDef& def, Region region, const Tolerances& tol = {}) {
  return BdeField(
      "conormal-euclid-asymptotic", region,
      [def, tol](double u, double v) { return detail::vvalues(conormal_form_jets<0>(def, u, v, tol)); },
      [def, tol](double u, double v) { return conormal_form_jets<1>(def, u, v, tol); },
      [def, tol](double u, double v) { return conormal_form_jets<2>(def, u, v, tol); });
}

struct ConormalRow {
  double u = 0.0, v = 0.0;
  bool degenerate = false;       // l = m = n = 0
  double lambda = 0.0;           // II_nu = lambda (l, m, n) with the unit normal of S^nu
  double residual = 0.0;         // max |II_nu - lambda (l, m, n)| / max |II_nu|
  double normal_residual = 0.0;  // |N_nu x xi| / |xi|
  double det_nu = 0.0;           // e g - f^2
  double det_lmn = 0.0;          // l n - m^2
  std::array<double, 3> second_form{};
  std::array<double, 3> third_form{};
};

/// II of the conormal surface against the affine third form (l, m, n) of S,
/// and the normal of S^nu against xi. lambda is read off the largest of
/// |l|, |m|, |n|.
inline ConormalRow conormal_correspondence_at(const SurfaceDef& def, double u, double v, const Tolerances& tol = {}) {
  if (def.domain.in_excluded_band(u, v)) throw DomainError("point lies in an excluded parabolic band");
  using detail::vpartial;
  const auto b = blaschke_jets<4>(eval_surface_jets<4>(def, u, v), tol.degeneracy_eps);
  const auto nu_u = detail::values(vpartial<1>(b.nu, 1, 0));
  const auto nu_v = detail::values(vpartial<1>(b.nu, 0, 1));
  const auto nu_uu = detail::values(vpartial<0>(b.nu, 2, 0));
  const auto nu_uv = detail::values(vpartial<0>(b.nu, 1, 1));
  const auto nu_vv = detail::values(vpartial<0>(b.nu, 0, 2));
  Vec3<double> N = cross(nu_u, nu_v);
  const double nn = norm(N);
  if (!(nn > 1e-10)) throw DomainError("conormal map is not an immersion at the point");
  N = scale(1.0 / nn, N);
  ConormalRow r;
  r.u = u;
  r.v = v;
  r.second_form = {dot(N, nu_uu), dot(N, nu_uv), dot(N, nu_vv)};
  r.third_form = {b.l.value(), b.m.value(), b.n.value()};
  const auto& e = r.second_form;
  const auto& t = r.third_form;
  r.det_nu = e[0] * e[2] - e[1] * e[1];
  r.det_lmn = t[0] * t[2] - t[1] * t[1];
  const Vec3<double> xi = detail::values(b.xi);
  r.normal_residual = norm(cross(N, xi)) / norm(xi);
  const double tmax = std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[2])});
  const double emax = std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
  const double scale_ref = norm(nu_u) * norm(nu_v);
  if (tmax <= tol.k_zero_tol && emax <= tol.k_zero_tol * std::max(1.0, scale_ref)) {
    r.degenerate = true;
    return r;
  }
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(t[i]) > std::abs(t[k])) k = i;
  }
  r.lambda = e[k] / t[k];
  double res = 0.0;
  for (int i = 0; i < 3; ++i) res = std::max(res, std::abs(e[i] - r.lambda * t[i]));
  r.residual = emax > 0 ? res / emax : res;
  return r;
}

/// Rows for every sample; samples that fail (parabolic, outside the domain)
/// are rethrown as DomainError naming the point.
inline std::vector<ConormalRow> verify_conormal_correspondence(const SurfaceDef& def,
                                                               const std::vector<Point2>& samples,
                                                               const Tolerances& tol = {}) {
  return parallel_map<ConormalRow>(samples.size(), [&](std::size_t k) {
    try {
      return conormal_correspondence_at(def, samples[k][0], samples[k][1], tol);
    } catch (const DomainError& e) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " at (%.17g, %.17g)", samples[k][0], samples[k][1]);
      throw DomainError(e.what() + std::string(buf));
    }
  });
}

// ---------------------------------------------------------------------------
// Meshes

struct ConormalMesh {
  std::vector<Vec3<double>> vertices;
  std::vector<Point2> params;
  std::vector<std::array<int, 4>> faces;  // quads, counter-clockwise in (u, v)
  std::vector<int> component_id;          // per face
  int components = 0;
  int clipped = 0;                        // vertices dropped by the norm cap
};

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

inline bool spans_period(double width, double period) { return period > 0 && std::abs(width - period) < 1e-9 * period; }

}  // namespace detail

/// Samples nu on an (nu + 1) x (nv + 1) grid. Vertices within the guard of a
/// parabolic band centre are left out, as are vertices whose norm exceeds the
/// cap (counted in `clipped`). Faces need all four corners. For the torus a
/// region spanning a full period is closed up before counting components.
inline ConormalMesh conormal_mesh(const SurfaceDef& def, const Region& region, int nu, int nv,
                                  const Tolerances& tol = {}) {
  region.validate();
  if (nu < 1 || nv < 1) throw ConfigError("mesh resolution must be positive");
  const int cols = nu + 1, rows = nv + 1;
  std::vector<Band> guards;
  for (Band b : def.domain.excluded) {
    b.half_width = tol.conormal_guard;
    guards.push_back(b);
  }
  auto guarded = [&](double u, double v) {
    for (const Band& b : guards) {
      if (b.contains(u, v)) return true;
    }
    return false;
  };
  struct Sample {
    bool valid = false, clipped = false;
    Vec3<double> x{};
  };
  const auto samples = parallel_map<Sample>(static_cast<std::size_t>(cols) * rows, [&](std::size_t k) {
    const double u = region.u0 + region.width() * static_cast<double>(k % cols) / nu;
    const double v = region.v0 + region.height() * static_cast<double>(k / cols) / nv;
    Sample s;
    if (guarded(u, v)) return s;
    Vec3<Jet<1>> n;
    try {
      n = conormal_jets<1>(def, u, v, tol);
    } catch (const DomainError& e) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " at vertex (%.17g, %.17g)", u, v);
      throw DomainError(e.what() + std::string(buf));
    }
    s.x = detail::values(n);
    if (!(norm(s.x) <= tol.vertex_cap)) {
      s.clipped = true;
      return s;
    }
    const Vec3<double> nu_u{n[0](1, 0), n[1](1, 0), n[2](1, 0)}, nu_v{n[0](0, 1), n[1](0, 1), n[2](0, 1)};
    if (!(norm(cross(nu_u, nu_v)) > 1e-10)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "conormal map is not an immersion at vertex (%.17g, %.17g)", u, v);
      throw DomainError(buf);
    }
    s.valid = true;
    return s;
  });

  ConormalMesh m;
  std::vector<int> index(samples.size(), -1);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].clipped) ++m.clipped;
    if (!samples[k].valid) continue;
    index[k] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(samples[k].x);
    m.params.push_back({region.u0 + region.width() * static_cast<double>(k % cols) / nu,
                        region.v0 + region.height() * static_cast<double>(k / cols) / nv});
  }
  auto at = [&](int i, int j) { return index[static_cast<std::size_t>(j) * cols + i]; };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const std::array<int, 4> f{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      if (f[0] >= 0 && f[1] >= 0 && f[2] >= 0 && f[3] >= 0) m.faces.push_back(f);
    }
  }
  detail::UnionFind uf(static_cast<int>(m.vertices.size()));
  for (const auto& f : m.faces) {
    for (int k = 1; k < 4; ++k) uf.unite(f[0], f[static_cast<std::size_t>(k)]);
  }
  if (def.is_torus()) {
    const double P = 2 * std::numbers::pi;
    if (detail::spans_period(region.width(), P)) {
      for (int j = 0; j <= nv; ++j) {
        if (at(0, j) >= 0 && at(nu, j) >= 0) uf.unite(at(0, j), at(nu, j));
      }
    }
    if (detail::spans_period(region.height(), P)) {
      for (int i = 0; i <= nu; ++i) {
        if (at(i, 0) >= 0 && at(i, nv) >= 0) uf.unite(at(i, 0), at(i, nv));
      }
    }
  }
  std::map<int, int> label;
  for (const auto& f : m.faces) {
    const int root = uf.find(f[0]);
    auto it = label.find(root);
    if (it == label.end()) it = label.emplace(root, static_cast<int>(label.size())).first;
    m.component_id.push_back(it->second);
  }
  m.components = static_cast<int>(label.size());
  return m;
}

/// OBJ text: one `o` record per component holding its vertices and quads,
/// 1-indexed across the file.
inline std::string export_obj(const ConormalMesh& m, const std::string& name = "conormal") {
  std::string s = "# affasym " + name + " mesh\n";
  char buf[160];
  int written = 0;
  for (int c = 0; c < m.components; ++c) {
    std::vector<int> remap(m.vertices.size(), -1);
    std::string faces;
    std::snprintf(buf, sizeof buf, "o %s_%d\n", name.c_str(), c);
    s += buf;
    for (std::size_t k = 0; k < m.faces.size(); ++k) {
      if (m.component_id[k] != c) continue;
      for (int vi : m.faces[k]) {
        if (remap[static_cast<std::size_t>(vi)] < 0) {
          remap[static_cast<std::size_t>(vi)] = ++written;
          const auto& x = m.vertices[static_cast<std::size_t>(vi)];
          std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", x[0], x[1], x[2]);
          s += buf;
        }
      }
      const auto& f = m.faces[k];
      std::snprintf(buf, sizeof buf, "f %d %d %d %d\n", remap[static_cast<std::size_t>(f[0])],
                    remap[static_cast<std::size_t>(f[1])], remap[static_cast<std::size_t>(f[2])],
                    remap[static_cast<std::size_t>(f[3])]);
      faces += buf;
    }
    s += faces;
  }
  return s;
}

/// Mesh of the surface itself with the same grid conventions (no guards).
inline ConormalMesh surface_mesh(const SurfaceDef& def, const Region& region, int nu, int nv) {
  region.validate();
  if (nu < 1 || nv < 1) throw ConfigError("mesh resolution must be positive");
  ConormalMesh m;
  const int cols = nu + 1;
  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i < cols; ++i) {
      const double u = region.u0 + region.width() * i / nu, v = region.v0 + region.height() * j / nv;
      m.vertices.push_back(surface_position(def, u, v));
      m.params.push_back({u, v});
    }
  }
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      m.faces.push_back({j * cols + i, j * cols + i + 1, (j + 1) * cols + i + 1, (j + 1) * cols + i});
      m.component_id.push_back(0);
    }
  }
  m.components = m.faces.empty() ? 0 : 1;
  return m;
}

}  // namespace affasym
