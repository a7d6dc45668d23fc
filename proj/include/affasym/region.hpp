#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "affasym/error.hpp"

namespace affasym {

/// Closed parameter rectangle [u0, u1] x [v0, v1].
struct Region {
  double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;

  double width() const { return u1 - u0; }
  double height() const { return v1 - v0; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool contains(double u, double v) const { return u >= u0 && u <= u1 && v >= v0 && v <= v1; }

  void validate() const {
    if (!(u1 > u0) || !(v1 > v0) || !std::isfinite(u0) || !std::isfinite(u1) || !std::isfinite(v0) ||
        !std::isfinite(v1)) {
      throw ConfigError("region must be a nondegenerate finite rectangle");
    }
  }
};

/// Parses "u0,u1,v0,v1".
inline Region parse_region(const std::string& text) {
  std::stringstream ss(text);
  Region r;
  double* slots[] = {&r.u0, &r.u1, &r.v0, &r.v1};
  for (int k = 0; k < 4; ++k) {
    std::string item;
    if (!std::getline(ss, item, ',')) throw ConfigError("region needs four comma-separated numbers");
    try {
      std::size_t used = 0;
      *slots[k] = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad region value '" + item + "'");
    }
  }
  std::string rest;
  if (std::getline(ss, rest)) throw ConfigError("region needs exactly four numbers");
  r.validate();
  return r;
}

}  // namespace affasym
