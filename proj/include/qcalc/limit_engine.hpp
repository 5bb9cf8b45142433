#pragma once

/**
 * @file limit_engine.hpp
 * @brief Numerical q -> 1 and p -> q limits of difference quotients.
 *
 * A quotient is sampled at offsets h_i = h0 * rho^i and the samples are
 * extrapolated to h = 0 with a Neville tableau in h. One-sided q-quotients
 * have an error expansion in powers of (q - 1), so the tableau runs in h
 * rather than h^2.
 */

#include "qcalc/expression.hpp"
#include "qcalc/q_operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcalc {

enum class ApproachSide { Above, Below };

struct LimitSpec {
  ApproachSide side = ApproachSide::Above;
  double initial_offset = 0.0625; // 2^-4
  double shrink_ratio = 0.5;
  unsigned max_steps = 24;
  double relative_tolerance = 1e-10;

  void validate() const
  {
    if (!(initial_offset > 0.0) || !std::isfinite(initial_offset))
      throw std::invalid_argument("initial offset must be positive");
    if (!(shrink_ratio > 0.0 && shrink_ratio < 1.0)) throw std::invalid_argument("shrink ratio must lie in (0, 1)");
    if (max_steps < 2) throw std::invalid_argument("max steps must be at least 2");
    if (!(relative_tolerance > 0.0)) throw std::invalid_argument("relative tolerance must be positive");
  }
};

struct ExtrapolationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  unsigned steps = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> trace; // (offset, quotient value)
  std::vector<double> corrections;              // |T[i][i] - T[i-1][i-1]| per row i >= 1
};

/// A quotient sample that is NaN or infinite.
class NonFiniteSample : public std::runtime_error {
public:
  explicit NonFiniteSample(double offset)
      : std::runtime_error("non-finite quotient at offset " + std::to_string(offset)), offset_(offset)
  {
  }
  double offset() const noexcept { return offset_; }

private:
  double offset_;
};

/**
 * Extrapolate quotient(h) to h -> 0+.
 *
 * Each new sample adds a tableau row. The error of an entry is the larger of
 * its distance to the entry on its left and to the entry diagonally above;
 * the entry with the smallest error so far is the running estimate. The run
 * stops once that error is within tolerance * max(1, |value|); otherwise it
 * uses all max_steps samples and reports converged = false.
 */
template <class Quotient>
ExtrapolationResult limit_extrapolate(Quotient&& quotient, const LimitSpec& spec)
{
  spec.validate();
  ExtrapolationResult r;
  r.error_estimate = std::numeric_limits<double>::infinity();

  std::vector<double> offsets;
  std::vector<double> prev, row;
  double h = spec.initial_offset;
  for (unsigned i = 0; i < spec.max_steps; ++i, h *= spec.shrink_ratio) {
    const double y = quotient(h);
    if (!std::isfinite(y)) throw NonFiniteSample(h);
    offsets.push_back(h);
    r.trace.emplace_back(h, y);

    row.assign(i + 1, 0.0);
    row[0] = y;
    if (i == 0) {
      r.value = y;
    }
    for (unsigned j = 1; j <= i; ++j) {
      const double ratio = offsets[i - j] / offsets[i];
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (ratio - 1.0);
      const double err = std::max(std::fabs(row[j] - row[j - 1]), std::fabs(row[j] - prev[j - 1]));
      if (err <= r.error_estimate) {
        r.error_estimate = err;
        r.value = row[j];
      }
    }
    if (i > 0) r.corrections.push_back(std::fabs(row[i] - prev[i - 1]));
    r.steps = i + 1;
    std::swap(prev, row);

    if (i > 0 && r.error_estimate <= spec.relative_tolerance * std::max(1.0, std::fabs(r.value))) {
      r.converged = true;
      break;
    }
  }
  return r;
}

/// The quotient of @p scheme at @p x, as a function of the limit offset h.
template <class F>
auto scheme_quotient(const DifferenceScheme& scheme, F f, double x, ApproachSide side)
{
  return [scheme, f = std::move(f), x, side](double h) -> double {
    DifferenceScheme s = scheme;
    switch (scheme.kind) {
    case SchemeKind::QForward:
    case SchemeKind::QPowerForward: s.q = 1.0 + h; break;
    case SchemeKind::QBackward:
    case SchemeKind::QPowerBackward: s.q = 1.0 - h; break;
    case SchemeKind::PQ:
    case SchemeKind::PQPower: s.p = side == ApproachSide::Above ? scheme.q + h : scheme.q - h; break;
    }
    return apply(s, f, x);
  };
}

/// Effective approach side: directional kinds carry their own, (p,q) kinds use LimitSpec::side.
inline ApproachSide effective_side(SchemeKind kind, ApproachSide requested)
{
  switch (kind) {
  case SchemeKind::QForward:
  case SchemeKind::QPowerForward: return ApproachSide::Above;
  case SchemeKind::QBackward:
  case SchemeKind::QPowerBackward: return ApproachSide::Below;
  default: return requested;
  }
}

/**
 * Derivative of f through the limit of a scheme's quotient at x.
 *
 * q-kinds send q -> 1 from the side their direction names. (p,q) kinds keep
 * the scheme's q fixed and send p -> q from spec.side; their limit is f'(q x)
 * for PQ and f'(x^q) for PQPower (f'(x) when q = 1).
 */
template <class F>
ExtrapolationResult derivative_estimate(F f, double x, const DifferenceScheme& scheme, const LimitSpec& spec)
{
  if (auto issue = scheme.point_issue(x); !issue.empty()) throw std::invalid_argument(issue);
  if (is_power_kind(scheme.kind) || is_pq_kind(scheme.kind))
    if (!std::isfinite(scheme.q)) throw std::invalid_argument("scheme base q must be finite");
  return limit_extrapolate(scheme_quotient(scheme, std::move(f), x, effective_side(scheme.kind, spec.side)), spec);
}

} // namespace qcalc
