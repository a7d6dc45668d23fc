#pragma once

#include <array>
#include <cmath>

namespace affasym {

template <typename T>
using Vec3 = std::array<T, 3>;

template <typename T>
Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <typename T>
Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

template <typename T, typename S>
Vec3<T> scale(const S& s, const Vec3<T>& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

template <typename T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// det[a, b, c] with a, b, c as columns.
template <typename T>
T det3(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return dot(cross(a, b), c);
}

inline double norm(const Vec3<double>& a) { return std::sqrt(dot(a, a)); }

/// Componentwise map, e.g. taking the value or a partial of each jet.
template <typename F, typename T>
auto map3(F&& f, const Vec3<T>& a) {
  return Vec3<decltype(f(a[0]))>{f(a[0]), f(a[1]), f(a[2])};
}

}  // namespace affasym
