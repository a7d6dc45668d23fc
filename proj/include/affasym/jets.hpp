#pragma once

// Truncated bivariate Taylor jets.
//
// A Jet<N> stores the raw partial derivatives d^{i+j} f / du^i dv^j of a
// scalar function at a base point for every i + j <= N, in graded order:
// degree 0, then (1,0), (0,1), then (2,0), (1,1), (0,2), ...
// Arithmetic propagates these partials exactly up to order N, so every
// formula written generically over the scalar type can be differentiated by
// instantiating it with a jet.

#include <array>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "affasym/error.hpp"

namespace affasym {

enum class Var { u, v };

/// Default lower bound on |constant term| for reciprocals and fractional powers.
inline constexpr double kDefaultDegeneracyEps = 1e-12;

namespace detail {

constexpr double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

constexpr double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

template <int N>
class Jet {
  static_assert(N >= 0, "jet order must be non-negative");

 public:
  static constexpr int kOrder = N;
  static constexpr int kSize = (N + 1) * (N + 2) / 2;

  static constexpr int index(int i, int j) {
    const int d = i + j;
    return d * (d + 1) / 2 + j;
  }

  constexpr Jet() = default;
  // Implicit so that scalar literals mix freely with jets in generic formulas.
  constexpr Jet(double constant) { c_[0] = constant; }  // NOLINT

  static Jet seed(Var which, double value) {
    Jet r(value);
    if constexpr (N >= 1) r.c_[which == Var::u ? index(1, 0) : index(0, 1)] = 1.0;
    return r;
  }

  static Jet from_partials(const std::array<double, kSize>& partials) {
    Jet r;
    r.c_ = partials;
    return r;
  }

  double value() const { return c_[0]; }

  /// Raw partial d^{i+j}/du^i dv^j at the base point; zero beyond the order.
  double operator()(int i, int j) const {
    if (i < 0 || j < 0 || i + j > N) return 0.0;
    return c_[index(i, j)];
  }

  const std::array<double, kSize>& partials() const { return c_; }

  /// Jet of the partial derivative d^{i+j} f / du^i dv^j, truncated to order M.
  template <int M>
  Jet<M> partial(int i, int j) const {
    static_assert(M <= N);
    if (i < 0 || j < 0 || M + i + j > N) {
      throw PreconditionError("jet of order " + std::to_string(N) + " cannot supply order-" +
                              std::to_string(M) + " jet of a " + std::to_string(i + j) +
                              "-th partial");
    }
    std::array<double, Jet<M>::kSize> out{};
    for (int d = 0; d <= M; ++d) {
      for (int b = 0; b <= d; ++b) out[Jet<M>::index(d - b, b)] = c_[index(d - b + i, b + j)];
    }
    return Jet<M>::from_partials(out);
  }

  auto du() const requires(N >= 1) { return partial<N - 1>(1, 0); }
  auto dv() const requires(N >= 1) { return partial<N - 1>(0, 1); }

  template <int M>
  Jet<M> truncate() const {
    return partial<M>(0, 0);
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k < kSize; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  // Leibniz rule on raw partials.
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int d = 0; d <= N; ++d) {
      for (int j = 0; j <= d; ++j) {
        const int i = d - j;
        double s = 0.0;
        for (int ai = 0; ai <= i; ++ai) {
          const double ci = detail::binomial(i, ai);
          for (int aj = 0; aj <= j; ++aj) {
            s += ci * detail::binomial(j, aj) * a.c_[index(ai, aj)] * b.c_[index(i - ai, j - aj)];
          }
        }
        r.c_[index(i, j)] = s;
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b, kDefaultDegeneracyEps); }
  friend Jet operator/(const Jet& a, double s) {
    Jet r = a;
    return r *= 1.0 / s;
  }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b, kDefaultDegeneracyEps); }

  /// f o a, given f^{(k)}(a.value()) for k = 0..N (Faa di Bruno through Horner
  /// evaluation of the univariate Taylor series on the centred jet).
  friend Jet compose(const Jet& a, const std::array<double, N + 1>& derivatives) {
    Jet centred = a;
    centred.c_[0] = 0.0;
    Jet r(derivatives[N] / detail::factorial(N));
    for (int k = N - 1; k >= 0; --k) {
      r = r * centred;
      r.c_[0] += derivatives[k] / detail::factorial(k);
    }
    return r;
  }

  friend Jet reciprocal(const Jet& b, double eps) {
    const double x = b.value();
    if (!(std::abs(x) > eps)) {
      throw DomainError("division by degenerate jet (constant term " + std::to_string(x) + ")");
    }
    std::array<double, N + 1> d{};
    double p = 1.0 / x;
    for (int k = 0; k <= N; ++k) {
      d[k] = ((k % 2) ? -1.0 : 1.0) * detail::factorial(k) * p;
      p /= x;
    }
    return compose(b, d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Jet& a) {
    os << "Jet<" << N << ">[";
    for (int k = 0; k < kSize; ++k) os << (k ? ", " : "") << a.c_[k];
    return os << "]";
  }

 private:
  std::array<double, kSize> c_{};
};

/// The order-4 jet used throughout for surface data.
using Jet2 = Jet<4>;

template <int N>
Jet<N> jet_seed(Var which, double value) {
  return Jet<N>::seed(which, value);
}

template <int N>
Jet<N> jet_div(const Jet<N>& a, const Jet<N>& b, double eps = kDefaultDegeneracyEps) {
  return a * reciprocal(b, eps);
}

// Scalar helpers so generic code can treat double and Jet<N> alike.

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) {
  return x.value();
}

inline double abs_pow(double x, double e, double eps = kDefaultDegeneracyEps) {
  if (!(std::abs(x) > eps)) throw DomainError("fractional power of near-zero value");
  return std::pow(std::abs(x), e);
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
  std::array<double, N + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  for (int k = 0; k <= N; ++k) d[k] = std::array<double, 4>{s, c, -s, -c}[k % 4];
  return compose(a, d);
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
  std::array<double, N + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  for (int k = 0; k <= N; ++k) d[k] = std::array<double, 4>{c, -s, -c, s}[k % 4];
  return compose(a, d);
}

template <int N>
Jet<N> tan(const Jet<N>& a) {
  if (std::abs(std::cos(a.value())) <= kDefaultDegeneracyEps) throw DomainError("tan at a pole");
  return sin(a) / cos(a);
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  std::array<double, N + 1> d;
  d.fill(std::exp(a.value()));
  return compose(a, d);
}

template <int N>
Jet<N> log(const Jet<N>& a, double eps = kDefaultDegeneracyEps) {
  const double x = a.value();
  if (!(x > eps)) throw DomainError("log of non-positive jet");
  std::array<double, N + 1> d{};
  d[0] = std::log(x);
  double p = 1.0 / x;
  for (int k = 1; k <= N; ++k) {
    d[k] = ((k % 2) ? 1.0 : -1.0) * detail::factorial(k - 1) * p;
    p /= x;
  }
  return compose(a, d);
}

/// |a|^e composed through order N.
template <int N>
Jet<N> abs_pow(const Jet<N>& a, double e, double eps = kDefaultDegeneracyEps) {
  const double x = a.value();
  if (!(std::abs(x) > eps)) {
    throw DomainError("fractional power of degenerate jet (constant term " + std::to_string(x) + ")");
  }
  const double sgn = x > 0 ? 1.0 : -1.0;
  std::array<double, N + 1> d{};
  double falling = 1.0;  // e (e-1) ... (e-k+1)
  for (int k = 0; k <= N; ++k) {
    d[k] = falling * std::pow(std::abs(x), e - k) * ((k % 2) ? sgn : 1.0);
    falling *= (e - k);
  }
  return compose(a, d);
}

template <int N>
Jet<N> sqrt(const Jet<N>& a, double eps = kDefaultDegeneracyEps) {
  if (!(a.value() > eps)) throw DomainError("sqrt of non-positive jet");
  return abs_pow(a, 0.5, eps);
}

/// Integer power by repeated multiplication (negative exponents divide).
template <typename T>
T int_pow(const T& x, long e) {
  if (e < 0) return T(1.0) / int_pow(x, -e);
  T r(1.0), base = x;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

}  // namespace affasym
