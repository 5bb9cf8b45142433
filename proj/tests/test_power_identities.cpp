#include "qcalc/power_identities.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace qcalc;

namespace {

// x^n by repeated multiplication, independent of ipow.
Rational power_oracle(const Rational& x, unsigned n)
{
  Rational r = 1;
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

std::vector<Rational> ints(std::initializer_list<int> v)
{
  std::vector<Rational> out;
  for (int i : v) out.emplace_back(i);
  return out;
}

} // namespace

TEST(ExpansionTerms, TenCubedTable)
{
  const auto list = power_expansion_terms(10, 3, SetVariant::U);
  EXPECT_EQ(list.terms, ints({1, 55, 97, 127, 145, 151, 145, 127, 97, 55}));
  EXPECT_EQ(list.first_k, 0u);
  EXPECT_EQ(power_via_expansion(10, 3, SetVariant::U), Rational(1000));
}

TEST(ExpansionTerms, SmallCases)
{
  EXPECT_EQ(power_expansion_terms(2, 3, SetVariant::U).terms, ints({1, 7}));
  EXPECT_EQ(power_expansion_terms(1, 6, SetVariant::U).terms, ints({1}));
  const auto s = power_expansion_terms(3, 2, SetVariant::S);
  EXPECT_EQ(s.first_k, 1u);
  EXPECT_EQ(s.terms.size(), 3u);
  EXPECT_EQ(s.k_at(2), 3u);
  EXPECT_EQ(power_expansion_terms(4, 3, SetVariant::C).terms.size(), 5u);
}

TEST(ExpansionTerms, RejectsZero)
{
  EXPECT_THROW(power_expansion_terms(0, 3, SetVariant::U), std::invalid_argument);
  EXPECT_THROW(power_via_expansion(0, 3, SetVariant::C), std::invalid_argument);
  EXPECT_THROW(power_via_expansion(3, 0, SetVariant::S), std::invalid_argument);
}

TEST(PowerViaExpansion, Examples)
{
  for (auto v : {SetVariant::U, SetVariant::S, SetVariant::C}) EXPECT_EQ(power_via_expansion(10, 3, v), Rational(1000));
  EXPECT_EQ(power_via_expansion(7, 5, SetVariant::U), Rational(16807));
  EXPECT_EQ(power_via_expansion(7, 5, SetVariant::S), Rational(16807));
  EXPECT_EQ(power_via_expansion(3, 2, SetVariant::U), Rational(9));
  // n < 3: individual terms are non-integral.
  EXPECT_FALSE(is_integer(power_expansion_terms(3, 2, SetVariant::U).terms[0]));
}

TEST(PowerViaExpansion, ExactOverSweep)
{
  for (unsigned x = 1; x <= 30; ++x)
    for (unsigned n = 1; n <= 8; ++n)
      for (auto v : {SetVariant::U, SetVariant::S, SetVariant::C})
        ASSERT_EQ(power_via_expansion(x, n, v), power_oracle(Rational(x), n))
            << "x=" << x << " n=" << n << " variant=" << variant_name(v);
}

TEST(PowerViaExpansion, GroupedFormEqualsTermSumMinusBoundary)
{
  for (unsigned x = 1; x <= 12; ++x)
    for (unsigned n = 1; n <= 6; ++n) {
      Rational sum = 0;
      for (const auto& t : power_expansion_terms(x, n, SetVariant::C).terms) sum += t;
      EXPECT_EQ(power_via_expansion(x, n, SetVariant::C), sum - expansion_term(x, n, x));
    }
}

TEST(ExpansionTerms, SymmetryAndBoundary)
{
  for (unsigned x = 1; x <= 20; ++x)
    for (unsigned n = 1; n <= 8; ++n) {
      const auto c = power_expansion_terms(x, n, SetVariant::C);
      ASSERT_EQ(c.terms.front(), c.terms.back()) << x << "," << n;
      for (unsigned k = 0; k <= x; ++k) ASSERT_EQ(expansion_term(x, n, k), expansion_term(x, n, x - k));
    }
}

TEST(Xi, Examples)
{
  EXPECT_EQ(xi(10u, Rational(1), 3), Rational(1000));
  EXPECT_EQ(xi(2u, Rational(3), 2), Rational(36));
  EXPECT_EQ(xi(5u, Rational(0), 4), Rational(0));
  EXPECT_THROW(xi(0u, Rational(1), 2), std::invalid_argument);
  EXPECT_NEAR(xi(4u, 0.5, 3), 8.0, 1e-12);
}

TEST(Xi, IdentityAndFactorization)
{
  const std::vector<Rational> ts = {Rational(0), Rational(1), Rational(1, 2), Rational(3), Rational(7, 5),
                                    Rational(-2, 3)};
  for (unsigned x = 1; x <= 20; ++x)
    for (unsigned n = 1; n <= 6; ++n)
      for (const auto& t : ts) {
        ASSERT_EQ(xi(x, t, n), power_oracle(Rational(x) * t, n)) << x << "," << n << "," << t;
        ASSERT_EQ(xi(x, t, n), xi(x, Rational(1), n) * power_oracle(t, n));
      }
}

TEST(Telescoping, Examples)
{
  EXPECT_EQ(telescoping_power_sum(3, 2), BigInt(9));
  EXPECT_EQ(telescoping_power_sum(3, 2, true), BigInt(15));
  EXPECT_EQ(telescoping_power_sum(1, 7), BigInt(1));
}

TEST(Telescoping, CorrectedAndLiteralAgainstClosedForms)
{
  for (unsigned x = 1; x <= 20; ++x)
    for (unsigned n = 1; n <= 8; ++n) {
      BigInt xn = 1, x1n = 1;
      for (unsigned i = 0; i < n; ++i) {
        xn *= x;
        x1n *= x + 1;
      }
      ASSERT_EQ(telescoping_power_sum(x, n), xn);
      ASSERT_EQ(telescoping_power_sum(x, n, true), x1n - 1);
    }
}

TEST(BinomialGrowth, MatchesForwardDifference)
{
  for (int x = -6; x <= 12; ++x)
    for (unsigned n = 1; n <= 9; ++n) {
      const Rational rx(x);
      const Rational expect = power_oracle(rx + 1, n) - power_oracle(rx, n);
      ASSERT_EQ(binomial_growth_expansion(rx, Rational(1), n), expect);
      ASSERT_EQ(forward_difference_power(rx, n), expect);
    }
}

TEST(BinomialGrowth, GeneralIncrement)
{
  const Rational x(5, 3), dx(-2, 7);
  for (unsigned n = 1; n <= 7; ++n)
    EXPECT_EQ(binomial_growth_expansion(x, dx, n), (power_oracle(x + dx, n) - power_oracle(x, n)) / dx);
  EXPECT_THROW(binomial_growth_expansion(x, Rational(0), 3), std::invalid_argument);
}
