#pragma once

// JSON, CSV and SVG serialization; surface configuration files (JSON).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "affasym/affine.hpp"
#include "affasym/conormal.hpp"
#include "affasym/error.hpp"
#include "affasym/flow.hpp"
#include "affasym/singular.hpp"
#include "affasym/surface.hpp"
#include "affasym/trace.hpp"

namespace affasym {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json vec(const Vec3<double>& a) { return Json::array({num(a[0]), num(a[1]), num(a[2])}); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Point data

inline Json to_json(const AffinePointData& d, double flat_tol = 1e-9) {
  using detail::num;
  using detail::vec;
  Json j;
  j["u"] = num(d.u);
  j["v"] = num(d.v);
  j["alpha"] = vec(d.alpha);
  j["E"] = num(d.E);
  j["F"] = num(d.F);
  j["G"] = num(d.G);
  j["L"] = num(d.Ldet);
  j["M"] = num(d.Mdet);
  j["N"] = num(d.Ndet);
  j["K"] = num(d.K);
  j["euclid_class"] = to_string(d.euclid_class);
  if (d.has_frame) {
    j["g11"] = num(d.g11);
    j["g12"] = num(d.g12);
    j["g22"] = num(d.g22);
    j["nu"] = vec(d.nu);
    j["xi"] = vec(d.xi);
  }
  if (d.has_third_form) {
    j["l"] = num(d.l);
    j["m"] = num(d.m);
    j["n"] = num(d.n);
    j["b"] = Json::array({num(d.b11), num(d.b12), num(d.b21), num(d.b22)});
    j["K_aff"] = num(d.K_aff);
    j["H_aff"] = num(d.H_aff);
    j["aff_class"] = to_string(d.aff_class);
    Json flags = Json::array();
    if (std::max({std::abs(d.l), std::abs(d.m), std::abs(d.n)}) <= flat_tol) flags.push_back("flat_affine_umbilic");
    j["flags"] = flags;
  }
  return j;
}

inline std::string affine_rows_csv(const std::vector<AffinePointData>& rows, double flat_tol = 1e-9) {
  std::string s = "u,v,K,euclid_class,g11,g12,g22,l,m,n,K_aff,H_aff,aff_class,flat_affine_umbilic\n";
  using detail::fmt17;
  for (const auto& d : rows) {
    const bool flat = std::max({std::abs(d.l), std::abs(d.m), std::abs(d.n)}) <= flat_tol;
    s += fmt17(d.u) + "," + fmt17(d.v) + "," + fmt17(d.K) + "," + to_string(d.euclid_class) + "," + fmt17(d.g11) + "," +
         fmt17(d.g12) + "," + fmt17(d.g22) + "," + fmt17(d.l) + "," + fmt17(d.m) + "," + fmt17(d.n) + "," +
         fmt17(d.K_aff) + "," + fmt17(d.H_aff) + "," + to_string(d.aff_class) + "," + (flat ? "1" : "0") + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Singular points and portraits

inline Json to_json(const LiftedState& s) {
  return {{"u", detail::num(s.u)}, {"v", detail::num(s.v)}, {"slope", detail::num(s.slope)}, {"chart", to_string(s.chart)}};
}

inline Json to_json(const SingularPointReport& r) {
  using detail::num;
  Json j;
  j["u"] = num(r.u);
  j["v"] = num(r.v);
  j["kind"] = to_string(r.kind);
  j["lambda"] = r.lambda ? num(*r.lambda) : Json(nullptr);
  Json ev = Json::array();
  for (const auto& e : r.eigenvalues) ev.push_back(Json::array({num(e.real()), num(e.imag())}));
  j["eigenvalues"] = ev;
  j["tangency_angle"] = r.tangency_angle ? num(*r.tangency_angle) : Json(nullptr);
  j["hessian_signature"] = r.hessian_signature ? Json(*r.hessian_signature) : Json(nullptr);
  Json lifts = Json::array();
  for (const auto& s : r.lifts) lifts.push_back(to_json(s));
  j["lifts"] = lifts;
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = num(v);
  j["metrics"] = m;
  return j;
}

inline Json to_json(const Polyline& p) {
  Json pts = Json::array();
  for (const auto& q : p.pts) pts.push_back(Json::array({detail::num(q[0]), detail::num(q[1])}));
  return {{"closed", p.closed}, {"points", pts}};
}

inline Json to_json(const Trajectory& t) {
  using detail::num;
  Json j;
  j["family"] = t.family == 0 ? "plus" : "minus";
  j["direction"] = t.direction;
  j["seed"] = Json::array({num(t.seed[0]), num(t.seed[1])});
  j["termination"] = to_string(t.termination);
  j["planar_fallback"] = t.planar_fallback;
  Json s = Json::array();
  for (const auto& x : t.samples) {
    s.push_back(Json::array({num(x.u), num(x.v), num(x.slope), to_string(x.chart), num(x.arclength)}));
  }
  j["samples"] = s;
  return j;
}

inline Json to_json(const Portrait& P) {
  Json j;
  j["name"] = P.name;
  j["region"] = Json::array({P.region.u0, P.region.u1, P.region.v0, P.region.v1});
  Json curves = Json::array();
  for (const auto& c : P.curves) {
    Json lines = Json::array();
    for (const auto& l : c.lines) lines.push_back(to_json(l));
    curves.push_back({{"label", c.label}, {"polylines", lines}});
  }
  j["curves"] = curves;
  Json pts = Json::array();
  for (const auto& r : P.points) pts.push_back(to_json(r));
  j["points"] = pts;
  Json tr = Json::array();
  for (const auto& t : P.trajectories) tr.push_back(to_json(t));
  j["sample_columns"] = Json::array({"u", "v", "slope", "chart", "arclength"});
  j["trajectories"] = tr;
  return j;
}

/// u to the right, v upward, equal scales, longest side 1024 px plus margins.
inline std::string portrait_svg(const Portrait& P) {
  const Region& r = P.region;
  const double margin = 24.0;
  const double s = 1024.0 / std::max(r.width(), r.height());
  const double W = r.width() * s + 2 * margin, H = r.height() * s + 2 * margin;
  auto px = [&](const Point2& p) -> Point2 { return {margin + (p[0] - r.u0) * s, margin + (r.v1 - p[1]) * s}; };
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", W, H,
                W, H);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"white\" stroke=\"#888\"/>\n", margin,
                margin, r.width() * s, r.height() * s);
  out += buf;
  for (const auto& t : P.trajectories) {
    Polyline pl;
    for (const auto& x : t.samples) pl.pts.push_back({x.u, x.v});
    const std::string style = t.family == 0 ? "fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"0.8\""
                                            : "fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"";
    out += polyline_svg_element(pl, px, style) + "\n";
  }
  for (const auto& c : P.curves) {
    std::string style = "fill=\"none\" stroke=\"black\" stroke-width=\"2.5\"";
    if (c.label != "parabolic") style += " stroke-dasharray=\"8 5\"";
    if (c.label == "affine_parabolic") style = "fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"2.5\" stroke-dasharray=\"8 5\"";
    for (const auto& l : c.lines) out += polyline_svg_element(l, px, "class=\"" + c.label + "\" " + style) + "\n";
  }
  for (const auto& rep : P.points) {
    const Point2 q = px({rep.u, rep.v});
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"5\" fill=\"orange\" stroke=\"black\"/>\n", q[0],
                  q[1]);
    out += buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" font-family=\"sans-serif\">%s</text>\n",
                  q[0] + 7, q[1] - 7, to_string(rep.kind));
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Conormal reports

inline Json to_json(const ConormalRow& r) {
  using detail::num;
  Json j;
  j["u"] = num(r.u);
  j["v"] = num(r.v);
  j["degenerate"] = r.degenerate;
  j["lambda"] = r.degenerate ? Json(nullptr) : num(r.lambda);
  j["residual"] = num(r.residual);
  j["normal_residual"] = num(r.normal_residual);
  j["det_second_form"] = num(r.det_nu);
  j["det_third_form"] = num(r.det_lmn);
  return j;
}

inline std::string conormal_rows_csv(const std::vector<ConormalRow>& rows) {
  using detail::fmt17;
  std::string s = "u,v,degenerate,lambda,residual,normal_residual,det_second_form,det_third_form\n";
  for (const auto& r : rows) {
    s += fmt17(r.u) + "," + fmt17(r.v) + "," + (r.degenerate ? "1" : "0") + "," + fmt17(r.lambda) + "," +
         fmt17(r.residual) + "," + fmt17(r.normal_residual) + "," + fmt17(r.det_nu) + "," + fmt17(r.det_lmn) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Surface configuration
//
//   {"kind": "monge", "height": "u^2 - v^3", "domain": [u0, u1, v0, v1]}
//   {"kind": "parametric", "x": "...", "y": "...", "z": "..."}
//   {"kind": "catalog", "id": "torus", "R": 3, "r": 1}
//   {"kind": "catalog", "id": "pick", "epsilon": 1, "sigma": 0.5, "q": {"40": 0.1, "22": -0.2}}

namespace detail {

inline CoeffMap parse_coeffs(const Json& q) {
  CoeffMap out;
  if (!q.is_object()) throw ConfigError("'q' must be an object of \"ij\": value pairs");
  for (const auto& [key, val] : q.items()) {
    if (key.size() != 2 || !std::isdigit(static_cast<unsigned char>(key[0])) ||
        !std::isdigit(static_cast<unsigned char>(key[1])) || !val.is_number()) {
      throw ConfigError("bad coefficient entry '" + key + "'");
    }
    out[{key[0] - '0', key[1] - '0'}] = val.get<double>();
  }
  return out;
}

inline double get_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

inline std::string get_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace detail

inline SurfaceDef surface_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("surface config must be a JSON object");
  const std::string kind = detail::get_string(j, "kind");
  SurfaceDef s;
  if (kind == "monge") {
    s = monge_surface(detail::get_string(j, "height"));
  } else if (kind == "parametric") {
    s = parametric_surface(detail::get_string(j, "x"), detail::get_string(j, "y"), detail::get_string(j, "z"));
  } else if (kind == "catalog") {
    const CatalogId id = catalog_id_from_string(detail::get_string(j, "id"));
    const CoeffMap q = j.contains("q") ? detail::parse_coeffs(j["q"]) : CoeffMap{};
    switch (id) {
      case CatalogId::pick:
        s = pick_surface({static_cast<int>(detail::get_number(j, "epsilon", 1)), detail::get_number(j, "sigma", 0), q});
        break;
      case CatalogId::cusp_gauss: {
        CuspGaussParams p{q};
        if (!p.q.count({2, 1})) p.q[{2, 1}] = 1.0;
        s = cusp_gauss_surface(p);
        break;
      }
      case CatalogId::flat_umbilic_chart:
        s = flat_umbilic_surface(
            {static_cast<int>(detail::get_number(j, "epsilon", 1)), detail::get_number(j, "k", 3.0), q});
        break;
      case CatalogId::torus:
        s = torus_surface({detail::get_number(j, "R", 3.0), detail::get_number(j, "r", 1.0)},
                          detail::get_number(j, "guard", 1e-3));
        break;
    }
  } else {
    throw ConfigError("unknown surface kind '" + kind + "'");
  }
  if (j.contains("domain")) {
    const Json& d = j["domain"];
    if (!d.is_array() || d.size() != 4) throw ConfigError("'domain' must be [u0, u1, v0, v1]");
    for (const auto& x : d) {
      if (!x.is_number()) throw ConfigError("'domain' entries must be numbers");
    }
    s.domain.u0 = d[0].get<double>();
    s.domain.u1 = d[1].get<double>();
    s.domain.v0 = d[2].get<double>();
    s.domain.v1 = d[3].get<double>();
    if (!(s.domain.u1 > s.domain.u0) || !(s.domain.v1 > s.domain.v0)) throw ConfigError("empty surface domain");
  }
  return s;
}

/// Region used when none is given: the full torus, the declared domain, or a
/// square around the origin of a local chart.
inline Region default_region(const SurfaceDef& s) {
  if (s.is_torus()) return {0.0, 2 * std::numbers::pi, 0.0, 2 * std::numbers::pi};
  const Domain& d = s.domain;
  if (std::isfinite(d.u0) && std::isfinite(d.u1) && std::isfinite(d.v0) && std::isfinite(d.v1)) {
    return {d.u0, d.u1, d.v0, d.v1};
  }
  if (s.kind == SurfaceKind::catalog && (s.catalog == CatalogId::pick || s.catalog == CatalogId::cusp_gauss)) {
    return {-0.5, 0.5, -0.5, 0.5};
  }
  return {-1.0, 1.0, -1.0, 1.0};
}

inline SurfaceDef load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read surface file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("surface file '" + path + "' is not valid JSON: " + e.what());
  }
  return surface_from_json(j);
}

}  // namespace affasym
