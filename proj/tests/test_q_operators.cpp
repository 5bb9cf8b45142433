#include "qcalc/expression.hpp"
#include "qcalc/q_operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qcalc;

namespace {

double rel_err(double got, double ref) { return std::fabs(got - ref) / std::max(1.0, std::fabs(ref)); }

double uniform(std::mt19937& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// x in [lo, hi] away from every value in `avoid` by at least `gap`.
double uniform_avoiding(std::mt19937& rng, double lo, double hi, std::initializer_list<double> avoid, double gap)
{
  for (;;) {
    const double v = uniform(rng, lo, hi);
    bool ok = true;
    for (double a : avoid) ok = ok && std::fabs(v - a) >= gap;
    if (ok) return v;
  }
}

auto monomial(unsigned n)
{
  return [n](auto x) { return ipow(x, static_cast<int>(n)); };
}

} // namespace

TEST(QDifference, Examples)
{
  const Expr sq = parse("x^2");
  EXPECT_DOUBLE_EQ(q_difference(sq, 2.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(q_difference(sq, 3.0, 2.0), 9.0);
  EXPECT_DOUBLE_EQ(q_difference(parse("x"), -1.7, 1.3), 1.0);
  EXPECT_THROW(q_difference(sq, 0.0, 2.0), DegenerateQuotient);
  EXPECT_THROW(q_difference(sq, 1.0, 1.0), DegenerateQuotient);
}

TEST(PQDifference, Examples)
{
  EXPECT_DOUBLE_EQ(pq_difference(parse("x^3"), 1.0, 2.0, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(pq_difference(parse("x"), 0.3, 2.5, 0.5), 1.0);
  EXPECT_THROW(pq_difference(parse("x"), 0.0, 2.0, 1.0), DegenerateQuotient);
  EXPECT_THROW(pq_difference(parse("x"), 1.0, 2.0, 2.0), DegenerateQuotient);
}

TEST(QPowerDifference, Examples)
{
  EXPECT_DOUBLE_EQ(q_power_difference(parse("x^2"), 2.0, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(q_power_difference(parse("x"), 3.0, 1.5), 1.0);
  EXPECT_THROW(q_power_difference(parse("x"), 1.0, 2.0), DegenerateQuotient);
  EXPECT_THROW(q_power_difference(parse("x"), 0.0, 2.0), DegenerateQuotient);
  EXPECT_THROW(q_power_difference(parse("x"), 2.0, 1.0), DegenerateQuotient);
}

TEST(PQPowerDifference, Examples)
{
  EXPECT_DOUBLE_EQ(pq_power_difference(parse("x^2"), 2.0, 2.0, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(pq_power_difference(parse("x^2"), 2.0, 3.0, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(pq_power_difference(parse("x"), 0.4, 1.7, 0.6), 1.0);
  EXPECT_THROW(pq_power_difference(parse("x"), 1.0, 3.0, 2.0), DegenerateQuotient);
  EXPECT_THROW(pq_power_difference(parse("x"), 2.0, 3.0, 3.0), DegenerateQuotient);
}

TEST(ClosedForms, Examples)
{
  EXPECT_DOUBLE_EQ(q_derivative_power_closed_form(2.0, 3, 2.0), 28.0);
  EXPECT_DOUBLE_EQ(q_derivative_power_closed_form(2.0, 3, 1.0), 12.0);
  EXPECT_DOUBLE_EQ(q_derivative_power_closed_form(0.0, 1, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(q_power_difference_power_closed_form(2.0, 2, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(q_power_difference_power_closed_form(2.0, 2, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(q_power_difference_power_closed_form(1.0, 7, 0.3), 7.0);
  EXPECT_DOUBLE_EQ(q_derivative_power_high_order(3.0, 3, 2, 1.0), 18.0);
  EXPECT_DOUBLE_EQ(q_derivative_power_high_order(3.0, 3, 1, 1.0, true), 36.0);
  EXPECT_DOUBLE_EQ(q_derivative_power_high_order(1.0, 5, 5, 1.0), 120.0);
  EXPECT_THROW(q_derivative_power_high_order(1.0, 3, 4, 1.0), std::invalid_argument);
}

TEST(ClosedForms, QDifferenceOfMonomialRandom)
{
  std::mt19937 rng(1001);
  for (int i = 0; i < 200; ++i) {
    const double x = uniform_avoiding(rng, -5.0, 5.0, {0.0}, 1e-3);
    const unsigned n = std::uniform_int_distribution<unsigned>(1, 8)(rng);
    const double q = uniform_avoiding(rng, 0.2, 3.0, {1.0}, 1e-3);
    const double direct = q_difference(monomial(n), x, q);
    const double closed = q_derivative_power_closed_form(x, n, q);
    ASSERT_LE(std::fabs(direct - closed), 1e-12 * std::fabs(closed)) << x << " " << n << " " << q;
  }
}

TEST(ClosedForms, QPowerDifferenceOfMonomialRandom)
{
  std::mt19937 rng(2002);
  for (int i = 0; i < 200; ++i) {
    const double x = uniform_avoiding(rng, 0.2, 5.0, {1.0}, 0.05);
    const unsigned m = std::uniform_int_distribution<unsigned>(1, 8)(rng);
    const double q = uniform_avoiding(rng, 0.2, 3.0, {1.0}, 0.05);
    const double direct = q_power_difference(monomial(m), x, q);
    const double closed = q_power_difference_power_closed_form(x, m, q);
    ASSERT_LE(std::fabs(direct - closed), 1e-12 * std::fabs(closed)) << x << " " << m << " " << q;
  }
}

TEST(ClosedForms, ExactAgreementInRationals)
{
  std::mt19937 rng(3003);
  auto rat = [&](int lo, int hi) {
    return Rational(std::uniform_int_distribution<int>(lo, hi)(rng), std::uniform_int_distribution<int>(1, 9)(rng));
  };
  for (int i = 0; i < 200; ++i) {
    Rational x = rat(-40, 40), q = rat(1, 30);
    if (x == 0 || q == 1) continue;
    const unsigned n = std::uniform_int_distribution<unsigned>(1, 8)(rng);
    ASSERT_EQ(q_difference(monomial(n), x, q), q_derivative_power_closed_form(x, n, q));
    const Rational xp = abs(x);
    const Rational qi(std::uniform_int_distribution<int>(2, 4)(rng));
    if (xp != 1) {
      ASSERT_EQ(q_power_difference(monomial(n), xp, qi), q_power_difference_power_closed_form(xp, n, qi));
    }
  }
}

TEST(Reductions, BitIdentical)
{
  std::mt19937 rng(4004);
  const Expr fs[] = {parse("sin(x)*x"), parse("exp(x) - x^3"), parse("sqrt(x) + 1/x")};
  for (int i = 0; i < 200; ++i) {
    const Expr& f = fs[i % 3];
    const double x = uniform_avoiding(rng, 0.1, 4.0, {1.0}, 1e-3);
    const double q = uniform_avoiding(rng, 0.2, 3.0, {1.0}, 1e-3);
    EXPECT_EQ(pq_difference(f, x, 1.0, q), q_difference(f, x, q));
    EXPECT_EQ(pq_power_difference(f, x, q, 1.0), q_power_difference(f, x, q));
  }
}

TEST(LinearExactness, AllOperators)
{
  std::mt19937 rng(5005);
  const double qs[] = {0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0};
  const double power_qs[] = {2.0, 3.0};
  for (int i = 0; i < 300; ++i) {
    const double alpha = std::uniform_int_distribution<int>(-64, 64)(rng) / 8.0;
    const double beta = std::uniform_int_distribution<int>(-40, 40)(rng) / 4.0;
    const auto f = [=](double x) { return alpha * x + beta; };
    const double x = std::uniform_int_distribution<int>(1, 32)(rng) / 4.0;
    const double q = qs[i % 7];
    const double p = qs[(i + 3) % 7];
    const double tol = 4.0 * std::max(std::ldexp(1.0, -52) * std::fabs(alpha), std::numeric_limits<double>::denorm_min());
    EXPECT_NEAR(q_difference(f, x, q), alpha, tol);
    EXPECT_NEAR(q_difference(f, -x, q), alpha, tol);
    if (p != q) {
      EXPECT_NEAR(pq_difference(f, x, p, q), alpha, tol);
    }
    if (x != 1.0) {
      EXPECT_NEAR(q_power_difference(f, x, power_qs[i % 2]), alpha, tol);
      EXPECT_NEAR(pq_power_difference(f, x, power_qs[i % 2], power_qs[(i + 1) % 2]), alpha, tol);
    }
  }
}

TEST(XiQuotient, Examples)
{
  EXPECT_EQ(xi_q_quotient(2u, 2u, Rational(2)), Rational(6));
  EXPECT_EQ(xi_q_quotient(3u, 1u, Rational(5, 7)), Rational(1));
  EXPECT_EQ(xi_q_quotient(10u, 3u, Rational(11, 10)), Rational(331));
  EXPECT_EQ(xi_pq_quotient(1u, 2u, Rational(3), Rational(1)), Rational(4));
  EXPECT_EQ(xi_pq_quotient(2u, 2u, Rational(2), Rational(1)), Rational(6));
  EXPECT_THROW(xi_q_quotient(2u, 2u, Rational(1)), DegenerateQuotient);
  EXPECT_EQ(xi_pq_quotient(4u, 3u, 1.7, 1.0), xi_q_quotient(4u, 3u, 1.7));
}

TEST(XiQuotient, MatchesClosedForm)
{
  for (unsigned x = 1; x <= 10; ++x)
    for (unsigned n = 1; n <= 6; ++n)
      for (const Rational& q : {Rational(1, 5), Rational(1, 2), Rational(11, 10), Rational(2), Rational(3)})
        ASSERT_EQ(xi_q_quotient(x, n, q), q_derivative_power_closed_form(Rational(x), n, q));

  std::mt19937 rng(6006);
  for (int i = 0; i < 200; ++i) {
    const unsigned x = std::uniform_int_distribution<unsigned>(1, 10)(rng);
    const unsigned n = std::uniform_int_distribution<unsigned>(1, 6)(rng);
    const double q = uniform_avoiding(rng, 0.2, 3.0, {1.0}, 0.1);
    const double closed = q_derivative_power_closed_form(static_cast<double>(x), n, q);
    ASSERT_LE(rel_err(xi_q_quotient(x, n, q), closed), 1e-12) << x << " " << n << " " << q;
  }
}

TEST(HighOrder, CorrectedMatchesSymbolicDerivative)
{
  for (unsigned n = 1; n <= 8; ++n) {
    const Expr f = parse("x^" + std::to_string(n));
    for (unsigned k = 1; k <= n; ++k) {
      const Expr dk = nth_derivative(f, k);
      for (int x = 1; x <= 5; ++x) {
        const Rational rx(x);
        ASSERT_EQ(q_derivative_power_high_order(rx, n, k, Rational(1)), eval_exact(dk, rx)) << n << " " << k;
        // Literal bound: (n+1)!/(n-k+1)! x^(n-k).
        const Rational deviated = Rational(factorial(n + 1) / factorial(n - k + 1)) * ipow(rx, static_cast<int>(n - k));
        ASSERT_EQ(q_derivative_power_high_order(rx, n, k, Rational(1), true), deviated);
      }
    }
  }
}

TEST(HighOrder, IteratedQDifferenceAgrees)
{
  // D_q^k x^n computed by applying the exact q-difference k times to the
  // coefficient vector: D_q x^m = [m]_q x^(m-1).
  for (unsigned n = 1; n <= 7; ++n)
    for (unsigned k = 1; k <= n; ++k)
      for (const Rational& q : {Rational(1, 3), Rational(2), Rational(5, 4)}) {
        Rational coeff = 1;
        for (unsigned j = 0; j < k; ++j) {
          Rational bracket = 0, qm = 1;
          for (unsigned m = 0; m < n - j; ++m, qm *= q) bracket += qm;
          coeff *= bracket;
        }
        const Rational x(7, 3);
        ASSERT_EQ(q_derivative_power_high_order(x, n, k, q), coeff * ipow(x, static_cast<int>(n - k)));
      }
}

TEST(HighOrderLiteral, DeviatesAtSecondOrder)
{
  // At q = 1 the N = 2 product is m(m-1) x^(2m-3) rather than m(m-1) x^(m-2).
  for (unsigned m = 2; m <= 6; ++m) {
    const Rational x(3);
    const Rational got = q_power_derivative_high_order_literal(x, m, 2, Rational(1));
    EXPECT_EQ(got, Rational(m * (m - 1)) * ipow(x, static_cast<int>(2 * m) - 3));
    if (m > 1) {
      EXPECT_NE(got, Rational(m * (m - 1)) * ipow(x, static_cast<int>(m) - 2));
    }
  }
  EXPECT_EQ(q_power_derivative_high_order_literal(Rational(3), 4, 1, Rational(1)), Rational(4 * 27));
}

TEST(Scheme, ValidationAndApply)
{
  const Expr f = parse("x^2");
  EXPECT_THROW(apply(DifferenceScheme::of(SchemeKind::QForward, 0.5), f, 2.0), std::invalid_argument);
  EXPECT_THROW(apply(DifferenceScheme::of(SchemeKind::QBackward, 1.5), f, 2.0), std::invalid_argument);
  EXPECT_THROW(apply(DifferenceScheme::of(SchemeKind::PQ, 2.0, 2.0), f, 2.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(apply(DifferenceScheme::of(SchemeKind::QBackward, 0.5), f, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(apply(DifferenceScheme::of(SchemeKind::PQPower, 2.0, 3.0), f, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(apply(DifferenceScheme::of(SchemeKind::QPowerForward, 2.0), f, 2.0), 6.0);
  EXPECT_EQ(DifferenceScheme::of(SchemeKind::QPowerForward, 2.0).point_issue(1.0).empty(), false);
  EXPECT_EQ(DifferenceScheme::of(SchemeKind::QForward, 2.0).point_issue(0.0), "x=0 inadmissible for q-difference");
  EXPECT_TRUE(DifferenceScheme::of(SchemeKind::QForward, 2.0).point_issue(-3.0).empty());
  EXPECT_DOUBLE_EQ(DifferenceScheme::of(SchemeKind::PQ, 0.5).limit_point(3.0), 1.5);
  EXPECT_DOUBLE_EQ(DifferenceScheme::of(SchemeKind::PQPower, 2.0).limit_point(3.0), 9.0);
}
