// affasym: command-line front end.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "affasym/acceptance.hpp"
#include "affasym/affine.hpp"
#include "affasym/conormal.hpp"
#include "affasym/flow.hpp"
#include "affasym/io.hpp"
#include "affasym/singular.hpp"
#include "affasym/surface.hpp"

namespace fs = std::filesystem;
using namespace affasym;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { ok = 0, verify_failed = 1, config_error = 2, domain_error = 3 };

struct SurfaceFlags {
  std::string surface;
  std::string bde;
  double lambda = -1.0;
  int eps1 = 1;
  double R = 3.0, r = 1.0, guard = 1e-3;
  int epsilon = 1;
  double sigma = 0.0, k = 3.0;
  std::vector<std::string> q;
};

struct RunFlags {
  SurfaceFlags s;
  std::string region;
  std::string res;
  std::vector<std::string> tol;
  std::string out = ".";
  std::string format;
};

void add_surface_flags(CLI::App* cmd, SurfaceFlags& s, bool allow_bde) {
  cmd->add_option("--surface", s.surface, "catalog:<id> | monge:<expr> | file:<path.json>");
  if (allow_bde) {
    cmd->add_option("--bde", s.bde, "synthetic field instead of a surface: folded | morse");
    cmd->add_option("--lambda", s.lambda, "folded model parameter");
    cmd->add_option("--eps1", s.eps1, "Morse model sign (+1 or -1)");
  }
  cmd->add_option("--R", s.R, "torus: centre radius");
  cmd->add_option("--r", s.r, "torus: tube radius");
  cmd->add_option("--guard", s.guard, "torus: half-width of the bands excluded around the parabolic circles");
  cmd->add_option("--epsilon", s.epsilon, "pick / flat_umbilic_chart: sign");
  cmd->add_option("--sigma", s.sigma, "pick: cubic coefficient");
  cmd->add_option("--k", s.k, "flat_umbilic_chart: coefficient of eps u v^2");
  cmd->add_option("--q", s.q, "chart coefficient ij=value (repeatable)");
}

void add_run_flags(CLI::App* cmd, RunFlags& f, const std::string& formats) {
  cmd->add_option("--region", f.region, "u0,u1,v0,v1");
  cmd->add_option("--res", f.res, "N or NxM");
  cmd->add_option("--tol", f.tol, "tolerance override key=value (repeatable)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "comma-separated subset of " + formats);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + text + "' for " + what);
  }
}

CoeffMap parse_q(const std::vector<std::string>& items) {
  CoeffMap q;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    const std::string key = it.substr(0, eq);
    if (eq == std::string::npos || key.size() != 2 || !std::isdigit(static_cast<unsigned char>(key[0])) ||
        !std::isdigit(static_cast<unsigned char>(key[1]))) {
      throw ConfigError("--q expects ij=value, got '" + it + "'");
    }
    q[{key[0] - '0', key[1] - '0'}] = parse_number(it.substr(eq + 1), "--q " + key);
  }
  return q;
}

SurfaceDef make_surface(const SurfaceFlags& s) {
  const auto colon = s.surface.find(':');
  if (colon == std::string::npos) throw ConfigError("--surface expects catalog:<id>, monge:<expr> or file:<path>");
  const std::string kind = s.surface.substr(0, colon), rest = s.surface.substr(colon + 1);
  if (kind == "monge") return monge_surface(rest);
  if (kind == "file") return load_surface_file(rest);
  if (kind != "catalog") throw ConfigError("unknown surface source '" + kind + "'");
  const CoeffMap q = parse_q(s.q);
  switch (catalog_id_from_string(rest)) {
    case CatalogId::pick: return pick_surface({s.epsilon, s.sigma, q});
    case CatalogId::cusp_gauss: {
      CuspGaussParams p{q};
      if (!p.q.count({2, 1})) p.q[{2, 1}] = 1.0;
      return cusp_gauss_surface(p);
    }
    case CatalogId::flat_umbilic_chart: return flat_umbilic_surface({s.epsilon, s.k, q});
    case CatalogId::torus:
      if (!q.empty()) throw ConfigError("torus takes no --q coefficients");
      return torus_surface({s.R, s.r}, s.guard);
  }
  throw ConfigError("unknown catalog surface");
}

BdeField make_model_field(const SurfaceFlags& s, const Region& region) {
  if (s.bde == "folded") return folded_model_field(s.lambda, false, region);
  if (s.bde == "morse") return morse_model_field(s.eps1, region);
  throw ConfigError("--bde expects folded or morse, got '" + s.bde + "'");
}

std::pair<int, int> parse_res(const std::string& text, std::pair<int, int> fallback) {
  if (text.empty()) return fallback;
  const auto x = text.find('x');
  auto one = [&](const std::string& t) {
    const double n = parse_number(t, "--res");
    if (n < 1 || n != std::floor(n) || n > 100000) throw ConfigError("--res entries must be positive integers");
    return static_cast<int>(n);
  };
  if (x == std::string::npos) {
    const int n = one(text);
    return {n, n};
  }
  return {one(text.substr(0, x)), one(text.substr(x + 1))};
}

Tolerances make_tolerances(const std::vector<std::string>& items) {
  Tolerances t;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects key=value, got '" + it + "'");
    t.set(it.substr(0, eq), parse_number(it.substr(eq + 1), "--tol " + it.substr(0, eq)));
  }
  return t;
}

std::set<std::string> parse_formats(const std::string& text, const std::set<std::string>& allowed,
                                    const std::set<std::string>& fallback) {
  if (text.empty()) return fallback;
  std::set<std::string> out;
  for (const auto& f : split(text, ',')) {
    if (!allowed.count(f)) throw ConfigError("format '" + f + "' is not available for this command");
    out.insert(f);
  }
  if (out.empty()) throw ConfigError("--format is empty");
  return out;
}

/// Collects outputs and writes them only after the command succeeded.
class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

  void commit(const std::string& command, int argc, char** argv) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_ + "': " + ec.message());
    Json meta;
    meta["tool"] = "affasym";
    meta["version"] = kVersion;
    meta["command"] = command;
    Json args = Json::array();
    for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
    meta["argv"] = args;
    meta["threads"] = worker_count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["finished_utc"] = stamp;
    Json names = Json::array();
    for (const auto& [name, body] : files_) names.push_back(name);
    meta["outputs"] = names;
    for (const auto& [name, body] : files_) write(name, body);
    write(command + ".meta.json", meta.dump(2) + "\n");
    for (const auto& [name, body] : files_) std::cout << (fs::path(dir_) / name).string() << "\n";
  }

 private:
  void write(const std::string& name, const std::string& body) {
    const fs::path target = fs::path(dir_) / name;
    const fs::path tmp = fs::path(dir_) / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << body;
      out.flush();
      if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw ConfigError("cannot move output into place: " + target.string());
    }
  }

  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> out;
  if (n == 1) return {0.5 * (a + b)};
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

std::string location(double u, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " at (u, v) = (%.17g, %.17g)", u, v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunFlags& f, int argc, char** argv) {
  if (f.s.surface.empty()) throw ConfigError("analyze needs --surface");
  const SurfaceDef def = make_surface(f.s);
  const Region region = f.region.empty() ? default_region(def) : parse_region(f.region);
  const auto [nu, nv] = parse_res(f.res, {32, 32});
  const Tolerances tol = make_tolerances(f.tol);
  const auto formats = parse_formats(f.format, {"json", "csv"}, {"json", "csv"});
  const auto us = grid(region.u0, region.u1, nu), vs = grid(region.v0, region.v1, nv);
  const std::size_t n = us.size() * vs.size();
  const auto rows = parallel_map<AffinePointData>(n, [&](std::size_t k) {
    const double u = us[k % us.size()], v = vs[k / us.size()];
    try {
      return blaschke_conormal_frame(def, u, v, tol);
    } catch (const DomainError& e) {
      throw DomainError(e.what() + location(u, v));
    }
  });
  Outputs out(f.out);
  if (formats.count("json")) {
    Json j = Json::array();
    for (const auto& r : rows) j.push_back(to_json(r, tol.k_zero_tol));
    out.add("analyze.json", j.dump(1) + "\n");
  }
  if (formats.count("csv")) out.add("analyze.csv", affine_rows_csv(rows, tol.k_zero_tol));
  out.commit("analyze", argc, argv);
  std::size_t flat = 0;
  for (const auto& r : rows) flat += std::max({std::abs(r.l), std::abs(r.m), std::abs(r.n)}) <= tol.k_zero_tol;
  std::cerr << rows.size() << " rows, " << flat << " flagged flat_affine_umbilic\n";
  return ok;
}

int cmd_portrait(const RunFlags& f, int trace_res, int argc, char** argv) {
  const Tolerances tol = make_tolerances(f.tol);
  const auto formats = parse_formats(f.format, {"svg", "json"}, {"svg", "json"});
  PortraitOptions opt;
  const auto [su, sv] = parse_res(f.res, {8, 8});
  opt.seeds_u = su;
  opt.seeds_v = sv;
  if (trace_res < 4) throw ConfigError("--trace-res must be at least 4");
  opt.trace_resolution = trace_res;
  Portrait P;
  if (!f.s.bde.empty()) {
    if (!f.s.surface.empty()) throw ConfigError("--surface and --bde are exclusive");
    const Region region = f.region.empty() ? Region{-1, 1, -1, 1} : parse_region(f.region);
    if (f.s.bde == "morse") opt.extra_degenerate_points.push_back({0.0, 0.0});
    P = build_portrait(make_model_field(f.s, region), opt, tol);
  } else {
    if (f.s.surface.empty()) throw ConfigError("portrait needs --surface or --bde");
    const SurfaceDef def = make_surface(f.s);
    P = build_portrait(def, f.region.empty() ? default_region(def) : parse_region(f.region), opt, tol);
  }
  Outputs out(f.out);
  if (formats.count("svg")) out.add("portrait.svg", portrait_svg(P));
  if (formats.count("json")) out.add("portrait.json", to_json(P).dump(1) + "\n");
  out.commit("portrait", argc, argv);
  std::cerr << P.trajectories.size() << " trajectories, " << P.points.size() << " singular points\n";
  for (const auto& r : P.points) std::cerr << "  " << to_string(r.kind) << location(r.u, r.v) << "\n";
  return ok;
}

int cmd_conormal(const RunFlags& f, int samples, unsigned seed, int argc, char** argv) {
  if (f.s.surface.empty()) throw ConfigError("conormal needs --surface");
  if (samples < 0) throw ConfigError("--samples must be nonnegative");
  const SurfaceDef def = make_surface(f.s);
  const Region region = f.region.empty() ? default_region(def) : parse_region(f.region);
  const auto [nu, nv] = parse_res(f.res, {64, 32});
  const Tolerances tol = make_tolerances(f.tol);
  const auto formats = parse_formats(f.format, {"obj", "csv", "json"}, {"obj", "csv", "json"});

  const ConormalMesh cm = conormal_mesh(def, region, nu, nv, tol);
  const ConormalMesh sm = surface_mesh(def, region, nu, nv);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(region.u0, region.u1), V(region.v0, region.v1);
  std::vector<Point2> pts;
  std::size_t attempts = 0;
  while (static_cast<int>(pts.size()) < samples && attempts < 1000u * static_cast<std::size_t>(samples + 1)) {
    ++attempts;
    const double u = U(rng), v = V(rng);
    bool guarded = false;
    for (Band b : def.domain.excluded) {
      b.half_width = tol.conormal_guard;
      guarded = guarded || b.contains(u, v);
    }
    if (guarded) continue;
    const double K = euclidean_data(eval_surface_jets<2>(def, u, v), tol).K;
    if (std::abs(K) <= tol.k_zero_tol) continue;
    pts.push_back({u, v});
  }
  const auto rows = verify_conormal_correspondence(def, pts, tol);

  Outputs out(f.out);
  if (formats.count("obj")) {
    out.add("surface.obj", export_obj(sm, "surface"));
    out.add("conormal.obj", export_obj(cm, "conormal"));
  }
  if (formats.count("csv")) out.add("conormal_report.csv", conormal_rows_csv(rows));
  if (formats.count("json")) {
    Json j;
    j["mesh"] = {{"vertices", cm.vertices.size()},
                 {"faces", cm.faces.size()},
                 {"components", cm.components},
                 {"clipped", cm.clipped}};
    Json r = Json::array();
    for (const auto& row : rows) r.push_back(to_json(row));
    j["samples"] = r;
    out.add("conormal_report.json", j.dump(1) + "\n");
  }
  out.commit("conormal", argc, argv);
  double res = 0.0, nres = 0.0;
  std::size_t degenerate = 0;
  for (const auto& row : rows) {
    res = std::max(res, row.residual);
    nres = std::max(nres, row.normal_residual);
    degenerate += row.degenerate;
  }
  std::cerr << cm.components << " conormal components, " << cm.clipped << " clipped vertices; " << rows.size()
            << " samples (" << degenerate << " degenerate), max residual " << res << ", max normal residual " << nres
            << "\n";
  return ok;
}

int cmd_verify(const std::string& variant) {
  AcceptanceOptions opt;
  if (variant == "printed") {
    opt.variant = LieCartanVariant::printed;
  } else if (variant != "standard") {
    throw ConfigError("--lie-cartan expects standard or printed");
  }
  return run_acceptance(std::cout, opt) == 0 ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine asymptotic lines: invariants, portraits, conormal surfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunFlags af, pf, cf;
  CLI::App* analyze = app.add_subcommand("analyze", "affine invariants on a sample grid");
  add_surface_flags(analyze, af.s, false);
  add_run_flags(analyze, af, "json,csv");

  int trace_res = 256;
  CLI::App* portrait = app.add_subcommand("portrait", "asymptotic line portrait (SVG and JSON)");
  add_surface_flags(portrait, pf.s, true);
  add_run_flags(portrait, pf, "svg,json");
  portrait->add_option("--trace-res", trace_res, "grid used to trace parabolic curves");

  int samples = 100;
  unsigned seed = 1;
  CLI::App* conormal = app.add_subcommand("conormal", "conormal meshes and correspondence report");
  add_surface_flags(conormal, cf.s, false);
  add_run_flags(conormal, cf, "obj,csv,json");
  conormal->add_option("--samples", samples, "random correspondence samples");
  conormal->add_option("--seed", seed, "sample seed");

  std::string variant = "standard";
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks (TAP output)");
  verify->add_option("--lie-cartan", variant, "lifted field variant: standard | printed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    if (*analyze) return cmd_analyze(af, argc, argv);
    if (*portrait) return cmd_portrait(pf, trace_res, argc, argv);
    if (*conormal) return cmd_conormal(cf, samples, seed, argc, argv);
    if (*verify) return cmd_verify(variant);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return domain_error;
  } catch (const PreconditionError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return domain_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return domain_error;
  }
  return config_error;
}
