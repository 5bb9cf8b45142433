#pragma once

/**
 * @file power_identities.hpp
 * @brief Discrete power expansions over the naturals, in exact arithmetic.
 *
 * The central object is the term polynomial
 *
 *     T_k(x, n) = 6 k x^(n-2) - 6 k^2 x^(n-3) + x^(n-3)
 *
 * whose sum over k = 0..x-1 (or 1..x) is x^n for every natural x >= 1.
 * For n < 3 the terms carry negative powers of x, so everything here is
 * computed over the rationals and only the totals are integers.
 */

#include "qcalc/rational.hpp"

#include <stdexcept>
#include <vector>

namespace qcalc {

/// Index set of an expansion: C = {0..x}, U = {0..x-1}, S = {1..x}.
enum class SetVariant { C, U, S };

inline const char* variant_name(SetVariant v)
{
  switch (v) {
  case SetVariant::C: return "C";
  case SetVariant::U: return "U";
  case SetVariant::S: return "S";
  }
  return "?";
}

struct ExpansionTermList {
  static constexpr int j = 6; // 3!

  unsigned x = 0;
  unsigned n = 0;
  SetVariant variant = SetVariant::U;
  unsigned first_k = 0;         // 1 for S, 0 otherwise
  std::vector<Rational> terms;  // terms[i] belongs to k = first_k + i

  unsigned k_at(std::size_t i) const { return first_k + static_cast<unsigned>(i); }
};

namespace detail {

inline void require_natural(unsigned x, unsigned n)
{
  if (x == 0) throw std::invalid_argument("x must be a natural number >= 1");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
}

} // namespace detail

/// T_k(x, n), exactly.
inline Rational expansion_term(unsigned x, unsigned n, unsigned k)
{
  const Rational rx(x);
  const Rational rk(k);
  const int e = static_cast<int>(n);
  return ExpansionTermList::j * rk * ipow(rx, e - 2) - ExpansionTermList::j * rk * rk * ipow(rx, e - 3) +
         ipow(rx, e - 3);
}

inline ExpansionTermList power_expansion_terms(unsigned x, unsigned n, SetVariant variant)
{
  detail::require_natural(x, n);
  ExpansionTermList list;
  list.x = x;
  list.n = n;
  list.variant = variant;
  list.first_k = variant == SetVariant::S ? 1 : 0;
  const unsigned last = variant == SetVariant::U ? x - 1 : x;
  list.terms.reserve(last - list.first_k + 1);
  for (unsigned k = list.first_k; k <= last; ++k) list.terms.push_back(expansion_term(x, n, k));
  return list;
}

/**
 * x^n rebuilt from the expansion.
 *
 * U and S sum their term lists. C uses the grouped form
 * x^(n-2) + 6 * sum_{k=0..x} (k x^(n-2) - k^2 x^(n-3)), in which the
 * constant x^(n-3) of each term is replaced by one leading x^(n-2); this
 * equals the C term-list sum minus its duplicated boundary term T_x = T_0.
 */
inline Rational power_via_expansion(unsigned x, unsigned n, SetVariant variant)
{
  detail::require_natural(x, n);
  if (variant != SetVariant::C) {
    Rational total = 0;
    for (const auto& t : power_expansion_terms(x, n, variant).terms) total += t;
    return total;
  }
  const Rational rx(x);
  const int e = static_cast<int>(n);
  const Rational hi = ipow(rx, e - 2);
  const Rational lo = ipow(rx, e - 3);
  Rational inner = 0;
  for (unsigned k = 0; k <= x; ++k) inner += Rational(k) * hi - Rational(k) * Rational(k) * lo;
  return hi + ExpansionTermList::j * inner;
}

/// sum_{k=1..n} C(n,k) x^(n-k) dx^(k-1) == ((x+dx)^n - x^n) / dx.
template <class T>
T binomial_growth_expansion(const T& x, const T& dx, unsigned n)
{
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (dx == T(0)) throw std::invalid_argument("dx must be nonzero");
  T sum(0);
  T coeff(1); // C(n, k)
  for (unsigned k = 1; k <= n; ++k) {
    coeff = coeff * T(n - k + 1) / T(k);
    sum += coeff * ipow(x, static_cast<int>(n - k)) * ipow(dx, static_cast<int>(k) - 1);
  }
  return sum;
}

/// Delta(x^n) = sum_{k=1..n} C(n,k) x^(n-k) == (x+1)^n - x^n.
template <class T>
T forward_difference_power(const T& x, unsigned n)
{
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  T sum(0);
  T coeff(1);
  for (unsigned k = 1; k <= n; ++k) {
    coeff = coeff * T(n - k + 1) / T(k);
    sum += coeff * ipow(x, static_cast<int>(n - k));
  }
  return sum;
}

/**
 * xi(x, t)_n = sum_{k=0..x-1} T_k(x, n) t^n, which is (x t)^n.
 * Exact for T = Rational; with T = double the sum is taken term by term.
 */
template <class T>
T xi(unsigned x, const T& t, unsigned n)
{
  detail::require_natural(x, n);
  const T tn = ipow(t, static_cast<int>(n));
  const T rx(x);
  const int e = static_cast<int>(n);
  const T hi = ipow(rx, e - 2);
  const T lo = ipow(rx, e - 3);
  T sum(0);
  for (unsigned k = 0; k < x; ++k) {
    const T rk(k);
    sum += T(ExpansionTermList::j) * rk * hi * tn - T(ExpansionTermList::j) * rk * rk * lo * tn + lo * tn;
  }
  return sum;
}

/**
 * Double sum sum_{t=1..x} sum_{k=1..n} C(n,k) b^(n-k).
 *
 * Corrected (default): b = t-1, telescoping to x^n.
 * Literal: b = t, which sums to (x+1)^n - 1 instead.
 */
inline BigInt telescoping_power_sum(unsigned x, unsigned n, bool literal = false)
{
  detail::require_natural(x, n);
  BigInt total = 0;
  for (unsigned t = 1; t <= x; ++t) {
    const BigInt base = literal ? BigInt(t) : BigInt(t - 1);
    for (unsigned k = 1; k <= n; ++k) total += binomial(n, k) * ipow(base, static_cast<int>(n - k));
  }
  return total;
}

} // namespace qcalc
