#pragma once

/**
 * @file q_operators.hpp
 * @brief Single-quotient difference operators and their closed forms.
 *
 * Every operator here is one difference quotient at fixed parameters; the
 * limits q -> 1 and p -> q are taken by limit_engine. The operators are
 * templates over the number type so that the same code runs in double and,
 * wherever the arguments allow it, in exact rational arithmetic.
 *
 *   q-difference          (f(x) - f(qx)) / ((1-q) x)
 *   (p,q)-difference      (f(px) - f(qx)) / ((p-q) x)
 *   q-power difference    (f(x^q) - f(x)) / (x^q - x)
 *   (p,q)-power diff.     (f(x^p) - f(x^q)) / (x^p - x^q)
 */

#include "qcalc/power_identities.hpp"
#include "qcalc/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qcalc {

/// A quotient whose denominator vanishes for the given parameters.
class DegenerateQuotient : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

namespace detail {

// base^exponent for the power differences. Rationals only admit integer
// exponents; doubles require a positive base.
template <class T>
T real_power(const T& base, const T& exponent)
{
  if constexpr (is_rational_v<T>) {
    if (!is_integer(exponent)) throw std::domain_error("exact power needs an integer exponent");
    return ipow(base, exponent.template convert_to<int>());
  } else {
    return std::pow(base, exponent);
  }
}

} // namespace detail

template <class T, class F>
T q_difference(F&& f, const T& x, const T& q)
{
  if (x == T(0)) throw DegenerateQuotient("x=0 inadmissible for q-difference");
  if (q == T(1)) throw DegenerateQuotient("q=1 makes the q-difference quotient 0/0");
  const T qx = q * x;
  return (f(x) - f(qx)) / ((T(1) - q) * x);
}

template <class T, class F>
T pq_difference(F&& f, const T& x, const T& p, const T& q)
{
  if (x == T(0)) throw DegenerateQuotient("x=0 inadmissible for (p,q)-difference");
  if (p == q) throw DegenerateQuotient("p=q makes the (p,q)-difference quotient 0/0");
  const T px = p * x;
  const T qx = q * x;
  return (f(px) - f(qx)) / ((p - q) * x);
}

template <class T, class F>
T q_power_difference(F&& f, const T& x, const T& q)
{
  if (!(x > T(0)) || x == T(1)) throw DegenerateQuotient("q-power difference needs x > 0 and x != 1");
  if (q == T(1)) throw DegenerateQuotient("q=1 makes the q-power difference quotient 0/0");
  const T xq = detail::real_power(x, q);
  if (xq == x) throw DegenerateQuotient("x^q == x in working precision");
  return (f(xq) - f(x)) / (xq - x);
}

template <class T, class F>
T pq_power_difference(F&& f, const T& x, const T& p, const T& q)
{
  if (!(x > T(0)) || x == T(1)) throw DegenerateQuotient("(p,q)-power difference needs x > 0 and x != 1");
  if (p == q) throw DegenerateQuotient("p=q makes the (p,q)-power difference quotient 0/0");
  const T xp = detail::real_power(x, p);
  const T xq = detail::real_power(x, q);
  if (xp == xq) throw DegenerateQuotient("x^p == x^q in working precision");
  return (f(xp) - f(xq)) / (xp - xq);
}

/// x^(n-1) * sum_{k<n} q^k. The q-difference of x^n; n x^(n-1) at q = 1.
template <class T>
T q_derivative_power_closed_form(const T& x, unsigned n, const T& q)
{
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  T geometric(0);
  T qk(1);
  for (unsigned k = 0; k < n; ++k) {
    geometric += qk;
    qk *= q;
  }
  return ipow(x, static_cast<int>(n) - 1) * geometric;
}

/**
 * k-th order q-derivative of x^n: x^(n-k) prod_{j<k} sum_{m=0..top(j)} q^m.
 *
 * The default upper bound top(j) = n-j-1 reproduces n!/(n-k)! x^(n-k) at
 * q = 1. With @p literal the bound is n-j, which gives
 * (n+1)!/(n-k+1)! x^(n-k) at q = 1 instead; it is kept to document that
 * deviation.
 */
template <class T>
T q_derivative_power_high_order(const T& x, unsigned n, unsigned k, const T& q, bool literal = false)
{
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (k == 0 || k > n) throw std::invalid_argument("derivative order must satisfy 1 <= k <= n");
  T product(1);
  for (unsigned j = 0; j < k; ++j) {
    const unsigned top = literal ? n - j : n - j - 1;
    T sum(0);
    T qm(1);
    for (unsigned m = 0; m <= top; ++m) {
      sum += qm;
      qm *= q;
    }
    product *= sum;
  }
  return ipow(x, static_cast<int>(n - k)) * product;
}

/// sum_{k=1..m} (x^q)^(m-k) x^(k-1). The q-power difference of x^m.
template <class T>
T q_power_difference_power_closed_form(const T& x, unsigned m, const T& q)
{
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  if (!(x > T(0))) throw std::domain_error("q-power closed form needs x > 0");
  const T xq = detail::real_power(x, q);
  T sum(0);
  for (unsigned k = 1; k <= m; ++k)
    sum += ipow(xq, static_cast<int>(m - k)) * ipow(x, static_cast<int>(k) - 1);
  return sum;
}

/**
 * Experimental: the N-th order q-power derivative written as the product
 * prod_{j<N} sum_{k=1..m-j} (x^q)^(m-k) x^(k-j-1).
 *
 * At q = 1 the x-power of this product is not m-N for N >= 2 (it carries
 * x^(2m-3) at N = 2), so it does not equal the N-th derivative.
 * iterated_power_derivative() in taylor_engine.hpp is the supported path.
 */
template <class T>
T q_power_derivative_high_order_literal(const T& x, unsigned m, unsigned order, const T& q)
{
  if (order == 0 || order > m) throw std::invalid_argument("derivative order must satisfy 1 <= N <= m");
  if (!(x > T(0))) throw std::domain_error("q-power closed form needs x > 0");
  const T xq = detail::real_power(x, q);
  T product(1);
  for (unsigned j = 0; j < order; ++j) {
    T sum(0);
    for (unsigned k = 1; k <= m - j; ++k)
      sum += ipow(xq, static_cast<int>(m - k)) * ipow(x, static_cast<int>(k) - static_cast<int>(j) - 1);
    product *= sum;
  }
  return product;
}

/// (xi(x,p)_n - xi(x,q)_n) / (x p - x q) == x^(n-1) (p^n - q^n) / (p - q).
template <class T>
T xi_pq_quotient(unsigned x, unsigned n, const T& p, const T& q)
{
  if (p == q) throw DegenerateQuotient("p=q makes the xi quotient 0/0");
  const T rx(x);
  return (xi(x, p, n) - xi(x, q, n)) / (rx * p - rx * q);
}

/// (xi(x,q)_n - xi(x,1)_n) / (x q - x); tends to n x^(n-1) as q -> 1.
template <class T>
T xi_q_quotient(unsigned x, unsigned n, const T& q)
{
  if (q == T(1)) throw DegenerateQuotient("q=1 makes the xi quotient 0/0");
  return xi_pq_quotient(x, n, q, T(1));
}

// ---------------------------------------------------------------------------
// Difference schemes
// ---------------------------------------------------------------------------

enum class SchemeKind { QForward, QBackward, PQ, QPowerForward, QPowerBackward, PQPower };

inline const char* scheme_name(SchemeKind k)
{
  switch (k) {
  case SchemeKind::QForward: return "q+";
  case SchemeKind::QBackward: return "q-";
  case SchemeKind::PQ: return "pq";
  case SchemeKind::QPowerForward: return "qpow+";
  case SchemeKind::QPowerBackward: return "qpow-";
  case SchemeKind::PQPower: return "pqpow";
  }
  return "?";
}

inline bool is_power_kind(SchemeKind k)
{
  return k == SchemeKind::QPowerForward || k == SchemeKind::QPowerBackward || k == SchemeKind::PQPower;
}

inline bool is_pq_kind(SchemeKind k) { return k == SchemeKind::PQ || k == SchemeKind::PQPower; }

/**
 * Operator family plus its parameters.
 *
 * For a single quotient (apply()) the directional kinds need q > 1 (forward)
 * or 0 < q < 1 (backward), and the (p,q) kinds need p != q. When a scheme is
 * handed to the limit engine only the kind matters for the q-kinds; for the
 * (p,q) kinds q is the fixed base that p approaches.
 */
struct DifferenceScheme {
  SchemeKind kind = SchemeKind::QForward;
  double q = 1.0;
  double p = 1.0;

  static DifferenceScheme of(SchemeKind kind, double q = 1.0, double p = 1.0) { return {kind, q, p}; }

  /// Throws std::invalid_argument when the parameters break the kind's rules.
  void validate_parameters() const
  {
    switch (kind) {
    case SchemeKind::QForward:
    case SchemeKind::QPowerForward:
      if (!(q > 1.0)) throw std::invalid_argument(std::string(scheme_name(kind)) + " needs q > 1");
      break;
    case SchemeKind::QBackward:
    case SchemeKind::QPowerBackward:
      if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument(std::string(scheme_name(kind)) + " needs 0 < q < 1");
      break;
    case SchemeKind::PQ:
    case SchemeKind::PQPower:
      if (p == q) throw std::invalid_argument(std::string(scheme_name(kind)) + " needs p != q");
      break;
    }
  }

  /// Empty when x is admissible, otherwise the reason it is not.
  std::string point_issue(double x) const
  {
    if (!std::isfinite(x)) return "x must be finite";
    if (is_power_kind(kind)) {
      if (!(x > 0.0) || x == 1.0) return "x=" + format_point(x) + " inadmissible for q-power difference (needs x > 0, x != 1)";
    } else if (x == 0.0) {
      return "x=0 inadmissible for q-difference";
    }
    return {};
  }

  /// Where f' is evaluated by the limit of this scheme's quotient at x.
  double limit_point(double x) const
  {
    switch (kind) {
    case SchemeKind::PQ: return q * x;
    case SchemeKind::PQPower: return std::pow(x, q);
    default: return x;
    }
  }

private:
  static std::string format_point(double x)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }
};

/// One quotient of the scheme at x with the scheme's own parameters.
template <class F>
double apply(const DifferenceScheme& s, F&& f, double x)
{
  s.validate_parameters();
  switch (s.kind) {
  case SchemeKind::QForward:
  case SchemeKind::QBackward: return q_difference(f, x, s.q);
  case SchemeKind::PQ: return pq_difference(f, x, s.p, s.q);
  case SchemeKind::QPowerForward:
  case SchemeKind::QPowerBackward: return q_power_difference(f, x, s.q);
  case SchemeKind::PQPower: return pq_power_difference(f, x, s.p, s.q);
  }
  throw std::logic_error("unknown scheme kind");
}

} // namespace qcalc
