#pragma once

/**
 * @file newton_interpolation.hpp
 * @brief Newton interpolation: forward differences on unit grids, divided
 *        differences on arbitrary node sets, and the q / q-power grid
 *        variants of the forward formula.
 */

#include "qcalc/expression.hpp"
#include "qcalc/rational.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcalc {

/// C(u, k) = u (u-1) ... (u-k+1) / k! for real u.
template <class T>
T binomial_real(const T& u, unsigned k)
{
  T c(1);
  for (unsigned i = 0; i < k; ++i) c = c * (u - T(i)) / T(i + 1);
  return c;
}

/// Delta^k f(a) for k = 0..order from samples f(a), f(a+1), ...
template <class T>
std::vector<T> forward_difference_table(std::span<const T> values, unsigned order)
{
  if (values.size() < static_cast<std::size_t>(order) + 1)
    throw std::invalid_argument("forward differences of order " + std::to_string(order) + " need " +
                                std::to_string(order + 1) + " samples");
  std::vector<T> work(values.begin(), values.begin() + order + 1);
  std::vector<T> out;
  out.reserve(order + 1);
  for (unsigned k = 0; k <= order; ++k) {
    out.push_back(work[0]);
    for (unsigned i = 0; i + 1 < work.size() - k; ++i) work[i] = work[i + 1] - work[i];
  }
  return out;
}

template <class T>
std::vector<T> forward_difference_table(const std::vector<T>& values, unsigned order)
{
  return forward_difference_table(std::span<const T>(values), order);
}

/// sum_{k=0..order} C(x-a, k) Delta^k f(a).
template <class T>
T newton_forward_eval(std::span<const T> table, const T& a, const T& x, unsigned order)
{
  if (table.size() < static_cast<std::size_t>(order) + 1) throw std::invalid_argument("table shorter than order + 1");
  T sum(0);
  for (unsigned k = 0; k <= order; ++k) sum += binomial_real(T(x - a), k) * table[k];
  return sum;
}

template <class T>
T newton_forward_eval(const std::vector<T>& table, const T& a, const T& x, unsigned order)
{
  return newton_forward_eval(std::span<const T>(table), a, x, order);
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Grid parameters that produce coincident or undefined nodes.
class DegenerateGrid : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  enum class Kind { Uniform, Geometric, PowerTower };
  Kind kind = Kind::Uniform;
  double a = 0.0;
  double q = 2.0;     // ratio (Geometric) or exponent ratio (PowerTower)
  unsigned order = 0; // K; the grid has K+1 nodes

  static GridSpec uniform(double a, unsigned order) { return {Kind::Uniform, a, 1.0, order}; }
  static GridSpec geometric(double a, double q, unsigned order) { return {Kind::Geometric, a, q, order}; }
  static GridSpec power_tower(double a, double q, unsigned order) { return {Kind::PowerTower, a, q, order}; }

  /// a+m, a q^m, or a^(q^m) for m = 0..K; throws DegenerateGrid.
  std::vector<double> nodes() const
  {
    switch (kind) {
    case Kind::Uniform: break;
    case Kind::Geometric:
      if (!(a > 0.0)) throw DegenerateGrid("geometric grid needs a > 0");
      if (!(q > 0.0) || q == 1.0) throw DegenerateGrid("geometric grid needs q > 0, q != 1 (duplicate nodes)");
      break;
    case Kind::PowerTower:
      if (!(a > 0.0) || a == 1.0) throw DegenerateGrid("power grid needs a > 0, a != 1");
      if (!(q > 0.0) || q == 1.0) throw DegenerateGrid("power grid needs q > 0, q != 1 (duplicate nodes)");
      break;
    }
    std::vector<double> out;
    out.reserve(order + 1);
    for (unsigned m = 0; m <= order; ++m) {
      double node = 0.0;
      switch (kind) {
      case Kind::Uniform: node = a + m; break;
      case Kind::Geometric: node = a * std::pow(q, m); break;
      case Kind::PowerTower: node = std::pow(a, std::pow(q, m)); break;
      }
      if (!std::isfinite(node)) throw DegenerateGrid("grid node " + std::to_string(m) + " is not finite");
      out.push_back(node);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j)
        if (out[i] == out[j]) throw DegenerateGrid("duplicate grid nodes");
    return out;
  }
};

/// Newton-form interpolant: nodes and leading divided differences f[x0..xj].
template <class T>
class DividedDifferenceTable {
public:
  DividedDifferenceTable(std::vector<T> nodes, std::span<const T> values) : nodes_(std::move(nodes))
  {
    if (nodes_.empty()) throw std::invalid_argument("no interpolation nodes");
    if (values.size() != nodes_.size()) throw std::invalid_argument("node and value counts differ");
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t j = i + 1; j < nodes_.size(); ++j)
        if (nodes_[i] == nodes_[j]) throw DegenerateGrid("duplicate interpolation nodes");

    std::vector<T> work(values.begin(), values.end());
    coefficients_.push_back(work[0]);
    for (std::size_t j = 1; j < nodes_.size(); ++j) {
      for (std::size_t i = 0; i + j < nodes_.size(); ++i)
        work[i] = (work[i + 1] - work[i]) / (nodes_[i + j] - nodes_[i]);
      coefficients_.push_back(work[0]);
    }
  }

  const std::vector<T>& nodes() const { return nodes_; }
  const std::vector<T>& coefficients() const { return coefficients_; }

  T operator()(const T& x) const
  {
    T acc = coefficients_.back();
    for (std::size_t j = coefficients_.size() - 1; j-- > 0;) acc = coefficients_[j] + (x - nodes_[j]) * acc;
    return acc;
  }

private:
  std::vector<T> nodes_;
  std::vector<T> coefficients_;
};

/**
 * Interpolant of f on the grid, evaluated at x.
 *
 * The table is built in exact rational arithmetic from the double nodes and
 * samples, so the only rounding is in the samples and the final conversion.
 * Geometric and power-tower nodes spread over many orders of magnitude, and
 * the floating Newton form loses everything to cancellation there.
 */
template <class F>
double divided_difference_interpolate(const GridSpec& grid, F&& f, double x)
{
  const std::vector<double> nodes = grid.nodes();
  std::vector<Rational> exact_nodes, exact_values;
  exact_nodes.reserve(nodes.size());
  exact_values.reserve(nodes.size());
  for (double node : nodes) {
    exact_nodes.push_back(to_rational(node));
    exact_values.push_back(to_rational(f(node)));
  }
  const DividedDifferenceTable<Rational> table(std::move(exact_nodes), exact_values);
  return to_double(table(to_rational(x)));
}

struct LiteralEvaluation {
  double value = 0.0;
  double sound_value = 0.0; // divided-difference interpolant on the same nodes
  double residual = 0.0;    // value - sound_value
};

namespace detail {

template <class F, class Node>
LiteralEvaluation literal_newton(F&& f, double a, double x, unsigned order, Node node, const GridSpec& grid)
{
  grid.nodes(); // rejects degenerate parameters before any sampling
  std::vector<double> samples(order + 1);
  for (unsigned m = 0; m <= order; ++m) samples[m] = f(node(m));
  LiteralEvaluation r;
  for (unsigned k = 0; k <= order; ++k) {
    double inner = 0.0;
    double choose = 1.0; // C(k, m)
    for (unsigned m = 0; m <= k; ++m) {
      inner += (m % 2 == 0 ? 1.0 : -1.0) * choose * samples[k - m];
      choose = choose * (k - m) / (m + 1);
    }
    r.value += binomial_real(x - a, k) * inner;
  }
  r.sound_value = divided_difference_interpolate(grid, f, x);
  r.residual = r.value - r.sound_value;
  return r;
}

} // namespace detail

/**
 * Experimental forward formula on the geometric nodes a q^m:
 * sum_k C(x-a, k) sum_{m<=k} (-1)^m C(k, m) f(a q^(k-m)).
 *
 * The alternating kernel uses C(k, m). The nodes are not unit-spaced, so the
 * sum is not an interpolant in general; the returned residual is measured
 * against the divided-difference interpolant on the same nodes.
 */
template <class F>
LiteralEvaluation literal_q_newton_eval(F&& f, double a, double x, double q, unsigned order)
{
  return detail::literal_newton(
      f, a, x, order, [a, q](unsigned m) { return a * std::pow(q, m); }, GridSpec::geometric(a, q, order));
}

/// As literal_q_newton_eval() on the power nodes a^(q^m).
template <class F>
LiteralEvaluation literal_qpower_newton_eval(F&& f, double a, double x, double q, unsigned order)
{
  return detail::literal_newton(
      f, a, x, order, [a, q](unsigned m) { return std::pow(a, std::pow(q, m)); }, GridSpec::power_tower(a, q, order));
}

} // namespace qcalc
