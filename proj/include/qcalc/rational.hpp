#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_rational_v = std::is_same_v<T, Rational>;

/// Square-and-multiply power; negative exponents invert the base.
template <class T>
T ipow(T base, int exponent)
{
  if (exponent < 0) {
    if (base == T(0)) throw std::domain_error("zero base raised to a negative power");
    base = T(1) / base;
    exponent = -exponent;
  }
  T result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

// Every finite double is a dyadic rational, so this is exact.
inline Rational to_rational(double v)
{
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  return Rational(v);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// C(n, k) for machine-size arguments, exactly.
inline BigInt binomial(unsigned n, unsigned k)
{
  if (k > n) return 0;
  BigInt c = 1;
  for (unsigned i = 0; i < k; ++i) {
    c *= n - i;
    c /= i + 1;
  }
  return c;
}

inline BigInt factorial(unsigned n)
{
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

} // namespace qcalc
