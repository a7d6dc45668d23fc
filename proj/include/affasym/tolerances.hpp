#pragma once

#include <map>
#include <string>

#include "affasym/error.hpp"

namespace affasym {

/// Numeric tolerances shared by all modules. Every field can be overridden by
/// name through set(), which is what the CLI's --tol key=value maps onto.
struct Tolerances {
  double k_zero_tol = 1e-9;         // sign classification of K and K_aff
  double lift_tol = 1e-8;           // |F| on the lifted surface
  double trace_tol = 1e-9;          // zero-set vertex refinement (relative)
  double angle_tol = 1e-3;          // tangency detection, radians
  double parabolic_guard = 1e-3;    // half-width of excluded bands around parabolic curves
  double conormal_guard = 0.05;     // margin used when meshing the conormal surface
  double degeneracy_eps = 1e-12;    // jet reciprocals and fractional powers
  double classify_tol = 1e-6;       // distance from lambda thresholds that counts as uncertain
  double vertex_cap = 1e3;          // conormal vertex norm clip
  double degenerate_radius = 1e-9;  // trajectories stop this close to a totally degenerate point

  void set(const std::string& key, double value) {
    if (!(value > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
    auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown tolerance '" + key + "'");
    this->*(it->second) = value;
  }

  double get(const std::string& key) const {
    auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown tolerance '" + key + "'");
    return this->*(it->second);
  }

  static const std::map<std::string, double Tolerances::*>& fields() {
    static const std::map<std::string, double Tolerances::*> table = {
        {"k_zero_tol", &Tolerances::k_zero_tol},
        {"lift_tol", &Tolerances::lift_tol},
        {"trace_tol", &Tolerances::trace_tol},
        {"angle_tol", &Tolerances::angle_tol},
        {"parabolic_guard", &Tolerances::parabolic_guard},
        {"conormal_guard", &Tolerances::conormal_guard},
        {"degeneracy_eps", &Tolerances::degeneracy_eps},
        {"classify_tol", &Tolerances::classify_tol},
        {"vertex_cap", &Tolerances::vertex_cap},
        {"degenerate_radius", &Tolerances::degenerate_radius},
    };
    return table;
  }
};

}  // namespace affasym
