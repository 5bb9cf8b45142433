#pragma once

/**
 * @file taylor_engine.hpp
 * @brief Taylor models and their termwise differentiation through
 *        difference-quotient limits.
 */

#include "qcalc/expression.hpp"
#include "qcalc/limit_engine.hpp"
#include "qcalc/q_operators.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcalc {

struct Smoothness {
  enum class Kind { Finite, Analytic };
  Kind kind = Kind::Analytic;
  unsigned order = 0; // meaningful for Finite

  static Smoothness finite(unsigned n) { return {Kind::Finite, n}; }
  static Smoothness analytic() { return {Kind::Analytic, 0}; }
  bool is_analytic() const { return kind == Kind::Analytic; }
};

/// Evaluation point outside the model's radius.
class OutOfRadius : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Model construction failed at a given derivative order.
class TaylorConstructionError : public std::domain_error {
public:
  TaylorConstructionError(unsigned order, const std::string& what)
      : std::domain_error("derivative of order " + std::to_string(order) + ": " + what), order_(order)
  {
  }
  unsigned order() const noexcept { return order_; }

private:
  unsigned order_;
};

/// Center a, coefficients c_k = f^(k)(a) / k!, radius, smoothness class.
class TaylorModel {
public:
  TaylorModel(double center, std::vector<double> coefficients,
              double radius = std::numeric_limits<double>::infinity(),
              std::optional<Smoothness> smoothness = std::nullopt)
      : center_(center), coefficients_(std::move(coefficients)), radius_(radius)
  {
    if (coefficients_.empty()) throw std::invalid_argument("a Taylor model needs at least one coefficient");
    if (!(radius_ > 0.0)) throw std::invalid_argument("radius must be positive");
    smoothness_ = smoothness.value_or(Smoothness::finite(order()));
  }

  double center() const { return center_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double radius() const { return radius_; }
  bool bounded() const { return std::isfinite(radius_); }
  const Smoothness& smoothness() const { return smoothness_; }
  unsigned order() const { return static_cast<unsigned>(coefficients_.size() - 1); }

  bool in_radius(double x) const { return std::fabs(x - center_) < radius_; }

  void require_in_radius(double x) const
  {
    if (!in_radius(x))
      throw OutOfRadius("|x - a| = " + std::to_string(std::fabs(x - center_)) + " is not inside radius " +
                        std::to_string(radius_));
  }

private:
  double center_;
  std::vector<double> coefficients_;
  double radius_;
  Smoothness smoothness_;
};

/// c_k = (d^k f / dx^k)(a) / k! from repeated symbolic differentiation.
inline TaylorModel taylor_from_expr(const Expr& f, double a, unsigned order,
                                    double radius = std::numeric_limits<double>::infinity(),
                                    std::optional<Smoothness> smoothness = std::nullopt)
{
  std::vector<double> coeffs;
  coeffs.reserve(order + 1);
  Expr d = f;
  double factorial = 1.0;
  for (unsigned k = 0; k <= order; ++k) {
    if (k > 0) {
      d = symbolic_derivative(d);
      factorial *= k;
    }
    try {
      coeffs.push_back(eval(d, a) / factorial);
    } catch (const EvalError& e) {
      throw TaylorConstructionError(k, e.what());
    }
  }
  return TaylorModel(a, std::move(coeffs), radius, smoothness);
}

/// Horner evaluation of sum c_k (x-a)^k.
inline double evaluate_polynomial(const TaylorModel& tm, double x)
{
  tm.require_in_radius(x);
  const double u = x - tm.center();
  const auto& c = tm.coefficients();
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * u + c[k];
  return acc;
}

/// Schloemilch-Roche parameter p and a bound M on |f^(N+1)| between a and x.
struct RemainderSpec {
  double p = 1.0;
  double derivative_bound = 0.0;
};

/**
 * M / (N! p) * |x-a|^p * max_{c between a and x} |x-c|^(N+1-p).
 *
 * The maximum sits at c = a when N+1-p >= 0, giving
 * M |x-a|^(N+1) / (N! p); p = N+1 is the Lagrange bound, p = 1 Cauchy's.
 * For p > N+1 the factor is unbounded near c = x and the bound is +inf.
 */
inline double remainder_bound(const TaylorModel& tm, double x, const RemainderSpec& spec)
{
  if (!(spec.p > 0.0)) throw std::invalid_argument("remainder parameter p must be positive");
  if (!(spec.derivative_bound >= 0.0)) throw std::invalid_argument("derivative bound M must be non-negative");
  tm.require_in_radius(x);
  const double dist = std::fabs(x - tm.center());
  if (dist == 0.0) return 0.0;
  const unsigned n = tm.order();
  const double tail_exponent = static_cast<double>(n) + 1.0 - spec.p;
  if (tail_exponent < 0.0) return std::numeric_limits<double>::infinity();
  double n_factorial = 1.0;
  for (unsigned i = 2; i <= n; ++i) n_factorial *= i;
  return spec.derivative_bound / (n_factorial * spec.p) * std::pow(dist, spec.p) * std::pow(dist, tail_exponent);
}

enum class MonomialRoute {
  Auto,   // xi quotients when the displacement is natural, direct otherwise
  Direct, // always the scheme's own quotient
  Xi,     // require the xi route; throws when it does not apply
};

struct TaylorDerivative {
  ExtrapolationResult limit; // combined: value, summed error, max steps, all converged
  bool xi_route = false;
  unsigned terms_used = 0;
  std::vector<ExtrapolationResult> terms; // lim Op[(x-a)^k], k = 1..terms_used
  std::optional<std::string> warning;
};

namespace detail {

// Point at which the scheme's quotient of u^k is taken so that its limit is
// k d^(k-1): d itself, d/q for PQ, d^(1/q) for PQPower.
inline double monomial_point(const DifferenceScheme& s, double d)
{
  switch (s.kind) {
  case SchemeKind::PQ:
    if (s.q == 0.0) throw std::invalid_argument("pq scheme needs a nonzero base q");
    return d / s.q;
  case SchemeKind::PQPower:
    if (s.q == 0.0) throw std::invalid_argument("pqpow scheme needs a nonzero base q");
    if (!(d > 0.0)) throw std::invalid_argument("power schemes need x0 - a > 0");
    return std::pow(d, 1.0 / s.q);
  default: return d;
  }
}

// Natural value of u for the xi route, or 0 when u is not a natural number.
inline unsigned natural_or_zero(double u)
{
  if (!(u >= 1.0) || u > 1e6 || std::floor(u) != u) return 0;
  return static_cast<unsigned>(u);
}

} // namespace detail

/**
 * Derivative at x0 of the model's polynomial, term by term:
 * sum_k c_k lim Op[(x-a)^k] at x0, each limit extrapolated separately and
 * summed in ascending k.
 *
 * For q, q- and pq kinds with a natural displacement (x0-a for q-kinds,
 * (x0-a)/q for pq) the monomial quotient is formed from xi sums. Analytic
 * models stop consuming terms once the next two derivative-term bounds
 * |c_k| k |x0-a|^(k-1) are at or below a tenth of the tolerance; finite
 * models use every coefficient and carry a warning that the remainder's
 * derivative is not part of the result.
 */
inline TaylorDerivative taylor_derivative_via_operator(const TaylorModel& tm, double x0, const DifferenceScheme& scheme,
                                                       const LimitSpec& spec, MonomialRoute route = MonomialRoute::Auto)
{
  spec.validate();
  tm.require_in_radius(x0);
  const double d = x0 - tm.center();
  if (d == 0.0) throw std::invalid_argument("x0 - a must be nonzero for a difference quotient");
  if (is_power_kind(scheme.kind) && (!(d > 0.0) || d == 1.0))
    throw std::invalid_argument("power schemes need x0 - a > 0 and x0 - a != 1");

  const double u = detail::monomial_point(scheme, d);
  if (auto issue = scheme.point_issue(u); !issue.empty()) throw std::invalid_argument(issue);

  const unsigned xi_base = is_power_kind(scheme.kind) ? 0 : detail::natural_or_zero(u);
  bool use_xi = false;
  switch (route) {
  case MonomialRoute::Auto: use_xi = xi_base != 0; break;
  case MonomialRoute::Direct: use_xi = false; break;
  case MonomialRoute::Xi:
    if (xi_base == 0) throw std::invalid_argument("xi route needs a q or pq scheme at a natural displacement");
    use_xi = true;
    break;
  }

  const ApproachSide side = effective_side(scheme.kind, spec.side);
  const auto& c = tm.coefficients();
  const unsigned n = tm.order();

  TaylorDerivative out;
  out.xi_route = use_xi;
  out.limit.converged = true;
  out.limit.value = 0.0;
  out.limit.error_estimate = 0.0;

  const auto term_bound = [&](unsigned k) {
    return k > n ? 0.0 : std::fabs(c[k]) * k * std::pow(std::fabs(d), static_cast<double>(k) - 1.0);
  };

  bool truncated = false;
  for (unsigned k = 1; k <= n; ++k) {
    if (tm.smoothness().is_analytic() && k >= 2) {
      const double threshold = spec.relative_tolerance * std::max(1.0, std::fabs(out.limit.value)) / 10.0;
      if (term_bound(k) <= threshold && term_bound(k + 1) <= threshold) {
        truncated = true;
        break;
      }
    }

    ExtrapolationResult term;
    if (use_xi) {
      const SchemeKind kind = scheme.kind;
      const double base_q = scheme.q;
      term = limit_extrapolate(
          [=](double h) {
            if (kind == SchemeKind::PQ) {
              const double p = side == ApproachSide::Above ? base_q + h : base_q - h;
              return xi_pq_quotient(xi_base, k, p, base_q);
            }
            return xi_q_quotient(xi_base, k, side == ApproachSide::Above ? 1.0 + h : 1.0 - h);
          },
          spec);
    } else {
      const auto monomial = [k](double v) { return ipow(v, static_cast<int>(k)); };
      term = limit_extrapolate(scheme_quotient(scheme, monomial, u, side), spec);
    }

    out.limit.value += c[k] * term.value;
    out.limit.error_estimate += std::fabs(c[k]) * term.error_estimate;
    out.limit.steps = std::max(out.limit.steps, term.steps);
    out.limit.converged = out.limit.converged && term.converged;
    out.terms.push_back(std::move(term));
    ++out.terms_used;
  }

  if (!tm.smoothness().is_analytic()) {
    out.warning = "finite smoothness: derivative of the order-" + std::to_string(n) +
                  " Taylor polynomial; the remainder term's derivative is not included";
  } else if (!truncated && n >= 1 && term_bound(n) > spec.relative_tolerance / 10.0) {
    out.warning = "analytic model exhausted its " + std::to_string(n) +
                  " coefficients before the term bound fell below tolerance";
  }
  return out;
}

/**
 * N-th derivative of x^m by N applications of the first-order q-power
 * derivative. Each application is the limit of the closed-form q-power
 * quotient of the current monomial, which maps c u^d to c d' u^(d-1)
 * with d' the extrapolated factor.
 */
inline double iterated_power_derivative(unsigned m, unsigned order, double x, const DifferenceScheme& q_scheme,
                                        const LimitSpec& spec)
{
  if (order == 0 || order > m) throw std::invalid_argument("derivative order must satisfy 1 <= N <= m");
  if (q_scheme.kind != SchemeKind::QPowerForward && q_scheme.kind != SchemeKind::QPowerBackward)
    throw std::invalid_argument("iterated power derivative needs a qpow+ or qpow- scheme");
  if (auto issue = q_scheme.point_issue(x); !issue.empty()) throw std::invalid_argument(issue);
  const double sign = q_scheme.kind == SchemeKind::QPowerForward ? 1.0 : -1.0;

  double coefficient = 1.0;
  for (unsigned j = 0; j < order; ++j) {
    const unsigned degree = m - j;
    const auto r = limit_extrapolate(
        [=](double h) { return q_power_difference_power_closed_form(x, degree, 1.0 + sign * h); }, spec);
    coefficient *= r.value / ipow(x, static_cast<int>(degree) - 1);
  }
  return coefficient * ipow(x, static_cast<int>(m - order));
}

} // namespace qcalc
