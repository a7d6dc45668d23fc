#pragma once

// Expression trees for height functions and parametrizations in (u, v).
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)*
//   primary := number | 'u' | 'v' | 'pi' | func '(' expr ')' | '(' expr ')'
//   exponent:= ['-'] literal | '(' ['-'] literal ['/' literal] ')'
// with func one of sin cos tan exp log sqrt.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>

#include "affasym/error.hpp"
#include "affasym/jets.hpp"

namespace affasym {

enum class UnaryFn { neg, sin, cos, tan, exp, log, sqrt };

struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct ExprNode {
  enum class Kind { constant, var_u, var_v, pi, unary, add, sub, mul, div, pow };

  Kind kind = Kind::constant;
  double value = 0.0;          // constant
  UnaryFn fn = UnaryFn::neg;   // unary
  Rational exponent;           // pow
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

namespace detail {

inline const char* unary_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::neg: return "-";
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::tan: return "tan";
    case UnaryFn::exp: return "exp";
    case UnaryFn::log: return "log";
    case UnaryFn::sqrt: return "sqrt";
  }
  return "?";
}

template <typename T>
T apply_unary(UnaryFn fn, const T& x) {
  using std::cos;
  using std::exp;
  using std::sin;
  switch (fn) {
    case UnaryFn::neg: return -x;
    case UnaryFn::sin: return sin(x);
    case UnaryFn::cos: return cos(x);
    case UnaryFn::tan:
      if (std::abs(std::cos(value_of(x))) <= kDefaultDegeneracyEps) throw DomainError("tan at a pole");
      if constexpr (std::is_same_v<T, double>) return std::tan(x);
      else return tan(x);
    case UnaryFn::exp: return exp(x);
    case UnaryFn::log:
      if (!(value_of(x) > 0.0)) throw DomainError("log of non-positive value");
      if constexpr (std::is_same_v<T, double>) return std::log(x);
      else return log(x);
    case UnaryFn::sqrt:
      if (!(value_of(x) > 0.0)) {
        if constexpr (std::is_same_v<T, double>) {
          if (x == 0.0) return 0.0;
        }
        throw DomainError("sqrt of non-positive value");
      }
      if constexpr (std::is_same_v<T, double>) return std::sqrt(x);
      else return sqrt(x);
  }
  return x;
}

template <typename T>
T rational_pow(const T& x, const Rational& e) {
  if (e.den == 1) return int_pow(x, e.num);
  const double x0 = value_of(x);
  if (x0 > 0.0) return abs_pow(x, e.value());
  if (x0 < 0.0 && (e.den % 2 != 0)) {
    const double sign = (e.num % 2 != 0) ? -1.0 : 1.0;
    return sign * abs_pow(x, e.value());
  }
  throw DomainError("fractional power of non-positive value");
}

}  // namespace detail

/// Immutable expression tree handle.
class Expr {
 public:
  using Node = ExprNode;
  using Kind = ExprNode::Kind;

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static Expr constant(double c) { return make({.kind = Kind::constant, .value = c}); }
  static Expr u() { return make({.kind = Kind::var_u}); }
  static Expr v() { return make({.kind = Kind::var_v}); }

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

  template <typename T>
  T eval(const T& u, const T& v) const {
    return eval_node(*root_, u, v);
  }

  double eval(double u, double v) const { return eval_node<double>(*root_, u, v); }

  /// Jet of the expression at (u, v).
  template <int N>
  Jet<N> jet(double u, double v) const {
    return eval(Jet<N>::seed(Var::u, u), Jet<N>::seed(Var::v, v));
  }

  std::string to_string() const { return print(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return equal(*a.root_, *b.root_);
  }

 private:
  static Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

  template <typename T>
  static T eval_node(const Node& n, const T& u, const T& v) {
    switch (n.kind) {
      case Kind::constant: return T(n.value);
      case Kind::var_u: return u;
      case Kind::var_v: return v;
      case Kind::pi: return T(std::numbers::pi);
      case Kind::unary: return detail::apply_unary(n.fn, eval_node(*n.lhs, u, v));
      case Kind::add: return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
      case Kind::sub: return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
      case Kind::mul: return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
      case Kind::div: {
        const T d = eval_node(*n.rhs, u, v);
        if (!(std::abs(value_of(d)) > kDefaultDegeneracyEps)) throw DomainError("division by zero");
        return eval_node(*n.lhs, u, v) / d;
      }
      case Kind::pow: return detail::rational_pow(eval_node(*n.lhs, u, v), n.exponent);
    }
    return T(0.0);
  }

  static bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::constant: return a.value == b.value;
      case Kind::var_u:
      case Kind::var_v:
      case Kind::pi: return true;
      case Kind::unary: return a.fn == b.fn && equal(*a.lhs, *b.lhs);
      case Kind::pow: return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
      default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
  }

  static int precedence(const Node& n) {
    switch (n.kind) {
      case Kind::add:
      case Kind::sub: return 1;
      case Kind::mul:
      case Kind::div: return 2;
      case Kind::unary: return n.fn == UnaryFn::neg ? 3 : 5;
      case Kind::pow: return 4;
      case Kind::constant: return n.value < 0.0 ? 3 : 5;
      default: return 5;
    }
  }

  static std::string print(const Node& n) {
    auto wrap = [](const Node& c, bool paren) { return paren ? "(" + print(c) + ")" : print(c); };
    switch (n.kind) {
      case Kind::constant: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        return n.value < 0.0 ? "(" + std::string(buf) + ")" : std::string(buf);
      }
      case Kind::var_u: return "u";
      case Kind::var_v: return "v";
      case Kind::pi: return "pi";
      case Kind::unary:
        if (n.fn == UnaryFn::neg) return "-" + wrap(*n.lhs, precedence(*n.lhs) < 4);
        return std::string(detail::unary_name(n.fn)) + "(" + print(*n.lhs) + ")";
      case Kind::pow: {
        std::string e;
        if (n.exponent.den == 1 && n.exponent.num >= 0) {
          e = std::to_string(n.exponent.num);
        } else if (n.exponent.den == 1) {
          e = "(" + std::to_string(n.exponent.num) + ")";
        } else {
          e = "(" + std::to_string(n.exponent.num) + "/" + std::to_string(n.exponent.den) + ")";
        }
        return wrap(*n.lhs, precedence(*n.lhs) < 4) + "^" + e;
      }
      default: {
        const int p = precedence(n);
        const char* op = n.kind == Kind::add ? " + " : n.kind == Kind::sub ? " - " : n.kind == Kind::mul ? "*" : "/";
        return wrap(*n.lhs, precedence(*n.lhs) < p) + op + wrap(*n.rhs, precedence(*n.rhs) <= p);
      }
    }
  }

  std::shared_ptr<const Node> root_;

  friend class ExprParser;
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  using Node = ExprNode;
  using Kind = ExprNode::Kind;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  static Expr binary(Kind k, Expr a, Expr b) {
    return Expr::make({.kind = k, .lhs = std::move(a.root_), .rhs = std::move(b.root_)});
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Kind::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Kind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Kind::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Kind::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      Expr inner = parse_unary();
      return Expr::make({.kind = Kind::unary, .fn = UnaryFn::neg, .lhs = std::move(inner.root_)});
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (accept('^')) {
      const Rational e = parse_exponent();
      base = Expr::make({.kind = Kind::pow, .exponent = e, .lhs = std::move(base.root_)});
    }
    return base;
  }

  // Digits with optional fraction, as an exact rational.
  Rational parse_literal_rational() {
    skip_ws();
    const std::size_t start = pos_;
    long num = 0, den = 1;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      num = num * 10 + (text_[pos_++] - '0');
      any = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        if (den > 100000000L) fail("exponent literal has too many digits");
        num = num * 10 + (text_[pos_++] - '0');
        den *= 10;
        any = true;
      }
    }
    if (!any) {
      pos_ = start;
      fail("non-literal exponent");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) fail("exponent literal must be a plain rational");
    return {num, den};
  }

  Rational parse_exponent() {
    const bool paren = accept('(');
    const bool negative = accept('-');
    Rational r = parse_literal_rational();
    if (paren && accept('/')) {
      const Rational d = parse_literal_rational();
      if (d.num == 0) fail("zero denominator in exponent");
      r = {r.num * d.den, r.den * d.num};
    }
    if (paren) expect(')');
    const long g = std::gcd(r.num, r.den);
    if (g > 1) r = {r.num / g, r.den / g};
    if (negative) r.num = -r.num;
    return r;
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(value);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "u") return Expr::u();
      if (name == "v") return Expr::v();
      if (name == "pi") return Expr::make({.kind = Kind::pi});
      static constexpr std::pair<std::string_view, UnaryFn> kFuncs[] = {
          {"sin", UnaryFn::sin}, {"cos", UnaryFn::cos}, {"tan", UnaryFn::tan},
          {"exp", UnaryFn::exp}, {"log", UnaryFn::log}, {"sqrt", UnaryFn::sqrt}};
      for (const auto& [fname, fn] : kFuncs) {
        if (name == fname) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return Expr::make({.kind = Kind::unary, .fn = fn, .lhs = std::move(arg.root_)});
        }
      }
      pos_ = start;
      throw ParseError("unknown identifier '" + std::string(name) + "'", start + 1);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Expr parse_expression(std::string_view text) { return ExprParser(text).parse(); }

}  // namespace affasym
