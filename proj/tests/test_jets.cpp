#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "affasym/expr.hpp"
#include "affasym/jets.hpp"

using namespace affasym;

TEST(Jets, SeedIsCoordinateJet) {
  const Jet2 u = jet_seed<4>(Var::u, 3.0);
  EXPECT_EQ(u(0, 0), 3.0);
  EXPECT_EQ(u(1, 0), 1.0);
  for (int k = 2; k < Jet2::kSize; ++k) EXPECT_EQ(u.partials()[k], 0.0);
  const Jet2 v = jet_seed<4>(Var::v, 0.0);
  EXPECT_EQ(v(0, 1), 1.0);
  EXPECT_EQ(v(1, 0), 0.0);
  EXPECT_EQ(jet_seed<4>(Var::u, -1.0)(1, 1), 0.0);
}

TEST(Jets, ProductOfCoordinates) {
  const Jet2 uv = jet_seed<4>(Var::u, 0.0) * jet_seed<4>(Var::v, 0.0);
  for (int k = 0; k < Jet2::kSize; ++k) EXPECT_EQ(uv.partials()[k], k == Jet2::index(1, 1) ? 1.0 : 0.0);
}

TEST(Jets, SquareAtTwo) {
  const Jet2 U = jet_seed<4>(Var::u, 2.0);
  const Jet2 sq = U * U;
  EXPECT_EQ(sq(0, 0), 4.0);
  EXPECT_EQ(sq(1, 0), 4.0);
  EXPECT_EQ(sq(2, 0), 2.0);
  EXPECT_EQ(sq(3, 0), 0.0);
  EXPECT_EQ(sq(0, 1), 0.0);
}

TEST(Jets, ReciprocalSeries) {
  const Jet2 r = jet_div(Jet2(1.0), Jet2(1.0) + jet_seed<4>(Var::u, 0.0));
  double fact = 1.0;
  for (int k = 0; k <= 4; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(r(k, 0), ((k % 2) ? -1.0 : 1.0) * fact, 1e-12);
  }
}

TEST(Jets, DivisionByDegenerateJetThrows) {
  EXPECT_THROW(jet_div(Jet2(1.0), jet_seed<4>(Var::u, 0.0)), DomainError);
  EXPECT_THROW(jet_div(Jet2(1.0), Jet2(1e-9), 1e-8), DomainError);
}

TEST(Jets, UnaryFunctions) {
  const Jet2 u = jet_seed<4>(Var::u, 0.0);
  const Jet2 s = sin(u);
  EXPECT_NEAR(s(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(s(3, 0), -1.0, 1e-15);
  EXPECT_NEAR(s(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(s(2, 0), 0.0, 1e-15);
  EXPECT_NEAR(s(4, 0), 0.0, 1e-15);

  const Jet2 r = sqrt(Jet2(4.0));
  EXPECT_EQ(r(0, 0), 2.0);
  for (int k = 1; k < Jet2::kSize; ++k) EXPECT_EQ(r.partials()[k], 0.0);

  const Jet2 q = abs_pow(Jet2(1.0) + u, -0.25);
  EXPECT_NEAR(q(1, 0), -0.25, 1e-15);
  EXPECT_NEAR(q(2, 0), -0.25 * -1.25, 1e-15);

  EXPECT_THROW(log(Jet2(-1.0)), DomainError);
  EXPECT_THROW(sqrt(Jet2(0.0)), DomainError);
  EXPECT_THROW(abs_pow(u, 0.25), DomainError);
}

TEST(Jets, AbsPowOfNegativeBase) {
  const Jet2 x = Jet2(-2.0) + jet_seed<4>(Var::u, 0.0);
  const Jet2 q = abs_pow(x, 0.5);
  // |x|^(1/2) = (2 - u)^(1/2) near u = 0
  EXPECT_NEAR(q(0, 0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(q(1, 0), -0.5 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(q(2, 0), -0.25 * std::pow(2.0, -1.5), 1e-14);
}

namespace {

Jet2 random_poly_jet(std::mt19937& rng, double u, double v) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  const Jet2 U = jet_seed<4>(Var::u, u), V = jet_seed<4>(Var::v, v);
  Jet2 r(c(rng));
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; i + j <= 3; ++j) r = r + c(rng) * int_pow(U, i) * int_pow(V, j);
  }
  return r;
}

void expect_jet_near(const Jet2& a, const Jet2& b, double tol) {
  for (int k = 0; k < Jet2::kSize; ++k) EXPECT_NEAR(a.partials()[k], b.partials()[k], tol) << "slot " << k;
}

}  // namespace

TEST(Jets, RingAxiomsOnPolynomials) {
  std::mt19937 rng(7);
  for (int t = 0; t < 20; ++t) {
    const Jet2 a = random_poly_jet(rng, 0.3, -0.2), b = random_poly_jet(rng, 0.3, -0.2),
               c = random_poly_jet(rng, 0.3, -0.2);
    expect_jet_near((a * b) * c, a * (b * c), 1e-12);
    expect_jet_near(a * (b + c), a * b + a * c, 1e-12);
  }
}

TEST(Jets, DivisionUndoesMultiplication) {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Jet2 a = random_poly_jet(rng, 0.1, 0.4);
    Jet2 b = random_poly_jet(rng, 0.1, 0.4);
    if (std::abs(b.value()) < 0.1) b = b + 1.0;
    expect_jet_near(jet_div(a * b, b), a, 1e-10);
  }
}

TEST(Jets, PartialExtraction) {
  const Jet<6> U = Jet<6>::seed(Var::u, 0.5), V = Jet<6>::seed(Var::v, -1.0);
  const Jet<6> f = U * U * U * V * V;  // u^3 v^2
  const Jet<2> fu = f.partial<2>(1, 0);  // 3 u^2 v^2
  EXPECT_NEAR(fu.value(), 3 * 0.25 * 1.0, 1e-14);
  EXPECT_NEAR(fu(1, 0), 6 * 0.5 * 1.0, 1e-14);
  EXPECT_NEAR(fu(0, 1), 6 * 0.25 * -1.0, 1e-14);
  EXPECT_NEAR(fu(1, 1), 12 * 0.5 * -1.0, 1e-14);
  EXPECT_THROW(f.partial<3>(2, 2), PreconditionError);
}

TEST(Jets, FiniteDifferenceAgreement) {
  const Expr e = parse_expression("exp(u/3)*sin(v + 0.4) + (u^2 + v^2 + 1)^(3/2) - log(2 + cos(u*v))");
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double h = 1e-4;
  for (int t = 0; t < 50; ++t) {
    const double u = d(rng), v = d(rng);
    const Jet2 j = e.jet<4>(u, v);
    auto lower = [&](double uu, double vv) { return e.jet<4>(uu, vv); };
    for (int deg = 1; deg <= 3; ++deg) {
      for (int jj = 0; jj <= deg; ++jj) {
        const int ii = deg - jj;
        // central difference of the order-(deg-1) partial
        const int si = ii > 0 ? ii - 1 : ii, sj = ii > 0 ? jj : jj - 1;
        const double fd = ii > 0 ? (lower(u + h, v)(si, sj) - lower(u - h, v)(si, sj)) / (2 * h)
                                 : (lower(u, v + h)(si, sj) - lower(u, v - h)(si, sj)) / (2 * h);
        EXPECT_NEAR(j(ii, jj), fd, std::max(1e-5, 1e-3 * std::abs(fd))) << ii << "," << jj;
      }
    }
  }
}
