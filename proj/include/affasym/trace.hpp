#pragma once

// Zero sets of scalar functions on a rectangle by marching squares with
// edge refinement.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "affasym/error.hpp"
#include "affasym/parallel.hpp"
#include "affasym/region.hpp"
#include "affasym/tolerances.hpp"

namespace affasym {

using Point2 = std::array<double, 2>;

struct Polyline {
  std::vector<Point2> pts;
  bool closed = false;
};

using ScalarFn = std::function<double(double, double)>;

namespace detail {

/// Illinois-modified regula falsi on the segment a + t (b - a), fa and fb of
/// opposite sign.
inline Point2 refine_edge(const ScalarFn& f, Point2 a, Point2 b, double fa, double fb, double tol) {
  const double scale = std::max(std::abs(fa), std::abs(fb));
  double t0 = 0.0, t1 = 1.0, f0 = fa, f1 = fb;
  int side = 0;
  double t = 0.5;
  for (int it = 0; it < 100; ++it) {
    t = (t0 * f1 - t1 * f0) / (f1 - f0);
    if (!(t > t0 && t < t1)) t = 0.5 * (t0 + t1);
    double ft;
    try {
      ft = f(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(ft)) break;
    if (std::abs(ft) <= tol * scale || t1 - t0 < 1e-15) break;
    if ((ft > 0) == (f1 > 0)) {
      t1 = t;
      f1 = ft;
      if (side == -1) f0 *= 0.5;
      side = -1;
    } else {
      t0 = t;
      f0 = ft;
      if (side == 1) f1 *= 0.5;
      side = 1;
    }
  }
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

inline double safe_eval(const ScalarFn& f, double u, double v) {
  try {
    const double x = f(u, v);
    return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace detail

/// Polylines of {f = 0} in the region on an nu x nv cell grid. Saddle cells
/// are resolved by the value at the cell centre; exact zeros at grid nodes
/// are nudged to +1e-13; cells touching a non-finite sample are skipped.
/// Output is deterministic: open chains first, then cycles, each started at
/// its lowest edge id.
inline std::vector<Polyline> trace_zero_set(const ScalarFn& f, const Region& region, int nu = 256, int nv = 256,
                                            const Tolerances& tol = {}) {
  region.validate();
  if (nu < 1 || nv < 1) throw ConfigError("trace resolution must be positive");
  const int cols = nu + 1, rows = nv + 1;
  auto node_u = [&](int i) { return region.u0 + region.width() * i / nu; };
  auto node_v = [&](int j) { return region.v0 + region.height() * j / nv; };
  std::vector<double> g = parallel_map<double>(static_cast<std::size_t>(cols) * rows, [&](std::size_t k) {
    const int i = static_cast<int>(k % cols), j = static_cast<int>(k / cols);
    double x = detail::safe_eval(f, node_u(i), node_v(j));
    if (x == 0.0) x = 1e-13;
    return x;
  });
  auto G = [&](int i, int j) { return g[static_cast<std::size_t>(j) * cols + i]; };

  // Edge ids: horizontal (i, j)-(i+1, j) -> j * nu + i; vertical (i, j)-(i, j+1) -> H + i * nv + j.
  const long H = static_cast<long>(nu) * rows;
  auto hedge = [&](int i, int j) { return static_cast<long>(j) * nu + i; };
  auto vedge = [&](int i, int j) { return H + static_cast<long>(i) * nv + j; };

  std::map<long, Point2> crossing;
  auto edge_point = [&](long id) -> const Point2& {
    auto it = crossing.find(id);
    if (it != crossing.end()) return it->second;
    Point2 a, b;
    double fa, fb;
    if (id < H) {
      const int j = static_cast<int>(id / nu), i = static_cast<int>(id % nu);
      a = {node_u(i), node_v(j)};
      b = {node_u(i + 1), node_v(j)};
      fa = G(i, j);
      fb = G(i + 1, j);
    } else {
      const long k = id - H;
      const int i = static_cast<int>(k / nv), j = static_cast<int>(k % nv);
      a = {node_u(i), node_v(j)};
      b = {node_u(i), node_v(j + 1)};
      fa = G(i, j);
      fb = G(i, j + 1);
    }
    return crossing.emplace(id, detail::refine_edge(f, a, b, fa, fb, tol.trace_tol)).first->second;
  };

  std::map<long, std::vector<long>> adj;
  auto link = [&](long a, long b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double c00 = G(i, j), c10 = G(i + 1, j), c11 = G(i + 1, j + 1), c01 = G(i, j + 1);
      if (std::isnan(c00) || std::isnan(c10) || std::isnan(c11) || std::isnan(c01)) continue;
      // edges in counter-clockwise order: bottom, right, top, left
      const long e[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
      const bool s[4] = {c00 > 0, c10 > 0, c11 > 0, c01 > 0};
      std::vector<int> cut;
      for (int k = 0; k < 4; ++k) {
        if (s[k] != s[(k + 1) % 4]) cut.push_back(k);
      }
      if (cut.size() == 2) {
        link(e[cut[0]], e[cut[1]]);
      } else if (cut.size() == 4) {
        double centre = detail::safe_eval(f, 0.5 * (node_u(i) + node_u(i + 1)), 0.5 * (node_v(j) + node_v(j + 1)));
        if (std::isnan(centre)) centre = 0.25 * (c00 + c10 + c11 + c01);
        // corners sharing the centre's sign are joined through the cell
        if ((centre > 0) == s[0]) {
          link(e[0], e[1]);
          link(e[2], e[3]);
        } else {
          link(e[3], e[0]);
          link(e[1], e[2]);
        }
      }
    }
  }

  std::vector<Polyline> out;
  std::map<long, bool> used;
  auto walk = [&](long start) {
    Polyline pl;
    long prev = -1, cur = start;
    for (;;) {
      used[cur] = true;
      pl.pts.push_back(edge_point(cur));
      long next = -1;
      for (long n : adj[cur]) {
        if (n != prev && !used[n]) {
          next = n;
          break;
        }
      }
      if (next < 0) {
        for (long n : adj[cur]) {
          if (n == start && n != prev && pl.pts.size() > 2) {
            pl.closed = true;
            pl.pts.push_back(pl.pts.front());
          }
        }
        break;
      }
      prev = cur;
      cur = next;
    }
    if (pl.pts.size() >= 2) out.push_back(std::move(pl));
  };
  for (const auto& [id, nb] : adj) {
    if (nb.size() == 1 && !used[id]) walk(id);
  }
  for (const auto& [id, nb] : adj) {
    if (!used[id]) walk(id);
  }
  return out;
}

namespace detail {
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

/// "u,v" rows, components separated by a blank line.
inline std::string polylines_to_csv(const std::vector<Polyline>& lines) {
  std::string s = "u,v\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (k) s += "\n";
    for (const Point2& p : lines[k].pts) s += detail::fmt17(p[0]) + "," + detail::fmt17(p[1]) + "\n";
  }
  return s;
}

/// SVG path data "M x y L x y ..." after mapping parameter points to pixels.
inline std::string polyline_path_data(const Polyline& pl, const std::function<Point2(const Point2&)>& to_px) {
  std::string d;
  char buf[64];
  for (std::size_t k = 0; k < pl.pts.size(); ++k) {
    const Point2 q = to_px(pl.pts[k]);
    std::snprintf(buf, sizeof buf, "%s%.3f %.3f", k ? " L" : "M", q[0], q[1]);
    d += buf;
  }
  if (pl.closed) d += " Z";
  return d;
}

inline std::string polyline_svg_element(const Polyline& pl, const std::function<Point2(const Point2&)>& to_px,
                                        const std::string& style) {
  return "<path d=\"" + polyline_path_data(pl, to_px) + "\" " + style + "/>";
}

}  // namespace affasym
