#pragma once

/**
 * @file expression.hpp
 * @brief Real functions of one variable: parsing, evaluation, derivatives.
 *
 * Grammar (whitespace is ignored between tokens):
 *
 *     expr    = term { ("+" | "-") term } ;
 *     term    = unary { ("*" | "/") unary } ;
 *     unary   = "-" unary | power ;
 *     power   = primary [ "^" unary ] ;          (* right-associative *)
 *     primary = number | "x" | func "(" expr ")" | "(" expr ")" ;
 *     func    = "sin" | "cos" | "exp" | "ln" | "sqrt" ;
 *     number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
 *             | "." digits [ exponent ] ;
 *
 * So "^" binds tighter than unary minus: "-x^2" is -(x^2), and
 * "2^-1" is 2^(-1). Decimal literals are stored as exact rationals.
 */

#include "qcalc/rational.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcalc {

enum class NodeKind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

enum class Function { Sin, Cos, Exp, Ln, Sqrt };

inline const char* function_name(Function f)
{
  switch (f) {
  case Function::Sin: return "sin";
  case Function::Cos: return "cos";
  case Function::Exp: return "exp";
  case Function::Ln: return "ln";
  case Function::Sqrt: return "sqrt";
  }
  return "?";
}

/// Immutable expression tree. Copies share structure.
class Expr {
public:
  struct Node;

  Expr() = default;

  static Expr constant(const Rational& value);
  static Expr constant(double value) { return constant(to_rational(value)); }
  static Expr variable();
  static Expr negate(Expr operand);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr argument);

  NodeKind kind() const;
  const Rational& value() const;
  double approx() const;
  Function function() const;
  const std::vector<Expr>& children() const;
  const Expr& child(std::size_t i) const { return children().at(i); }

  bool empty() const { return !node_; }

  /// Floating evaluation; see eval().
  double operator()(double x) const;

private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  Rational value;
  double approx = 0.0;
  Function fn = Function::Sin;
  std::vector<Expr> children;
};

inline Expr Expr::constant(const Rational& value)
{
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  n->approx = to_double(value);
  return Expr(std::move(n));
}

inline Expr Expr::variable()
{
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  return Expr(std::move(n));
}

inline Expr Expr::negate(Expr operand)
{
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

inline Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs)
{
  if (kind != NodeKind::Add && kind != NodeKind::Subtract && kind != NodeKind::Multiply &&
      kind != NodeKind::Divide && kind != NodeKind::Power)
    throw std::invalid_argument("not a binary node kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

inline Expr Expr::call(Function fn, Expr argument)
{
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->fn = fn;
  n->children.push_back(std::move(argument));
  return Expr(std::move(n));
}

inline NodeKind Expr::kind() const { return node_->kind; }
inline const Rational& Expr::value() const { return node_->value; }
inline double Expr::approx() const { return node_->approx; }
inline Function Expr::function() const { return node_->fn; }
inline const std::vector<Expr>& Expr::children() const { return node_->children; }

inline bool structurally_equal(const Expr& a, const Expr& b)
{
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case NodeKind::Constant: return a.value() == b.value();
  case NodeKind::Variable: return true;
  case NodeKind::Call:
    if (a.function() != b.function()) return false;
    break;
  default: break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!structurally_equal(ca[i], cb[i])) return false;
  return true;
}

inline bool depends_on_x(const Expr& e)
{
  if (e.kind() == NodeKind::Variable) return true;
  for (const auto& c : e.children())
    if (depends_on_x(c)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {

enum Precedence : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

// Exact decimal form when the denominator is 2^a 5^b, otherwise empty.
inline std::string decimal_form(const Rational& r)
{
  BigInt num = abs(numerator(r));
  BigInt den = denominator(r);
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return {};
  const unsigned digits = std::max(twos, fives);
  BigInt scaled = num * boost::multiprecision::pow(BigInt(10), digits) / denominator(r);
  std::string s = scaled.str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
  }
  return s;
}

inline int constant_precedence(const Rational& r)
{
  if (decimal_form(r).empty()) return kProduct;
  return r < 0 ? kUnary : kAtom;
}

inline int precedence(const Expr& e)
{
  switch (e.kind()) {
  case NodeKind::Constant: return constant_precedence(e.value());
  case NodeKind::Variable:
  case NodeKind::Call: return kAtom;
  case NodeKind::Negate: return kUnary;
  case NodeKind::Add:
  case NodeKind::Subtract: return kSum;
  case NodeKind::Multiply:
  case NodeKind::Divide: return kProduct;
  case NodeKind::Power: return kPower;
  }
  return kAtom;
}

inline std::string render(const Expr& e);

inline std::string wrap(const Expr& e, bool parens)
{
  return parens ? "(" + render(e) + ")" : render(e);
}

inline std::string render(const Expr& e)
{
  switch (e.kind()) {
  case NodeKind::Constant: {
    const Rational& v = e.value();
    std::string dec = decimal_form(v);
    if (!dec.empty()) return v < 0 ? "-" + dec : dec;
    return numerator(v).str() + "/" + denominator(v).str();
  }
  case NodeKind::Variable: return "x";
  case NodeKind::Call: return std::string(function_name(e.function())) + "(" + render(e.child(0)) + ")";
  case NodeKind::Negate: return "-" + wrap(e.child(0), precedence(e.child(0)) < kUnary);
  case NodeKind::Power:
    return wrap(e.child(0), precedence(e.child(0)) < kAtom) + "^" +
           wrap(e.child(1), precedence(e.child(1)) < kUnary);
  default: break;
  }
  const int p = precedence(e);
  const char* op = e.kind() == NodeKind::Add        ? " + "
                   : e.kind() == NodeKind::Subtract ? " - "
                   : e.kind() == NodeKind::Multiply ? "*"
                                                    : "/";
  return wrap(e.child(0), precedence(e.child(0)) < p) + op + wrap(e.child(1), precedence(e.child(1)) <= p);
}

} // namespace detail

/// Text that parses back to a structurally equal tree (for parsed inputs).
inline std::string to_string(const Expr& e) { return detail::render(e); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, std::string expected, std::string found)
      : std::runtime_error("parse error at offset " + std::to_string(offset) + ": expected " + expected +
                           ", found " + found),
        offset_(offset), expected_(std::move(expected)), found_(std::move(found))
  {
  }

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse()
  {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("operator or end of input");
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end()
  {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek()
  {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string describe_here()
  {
    if (at_end()) return "end of input";
    return std::string("'") + text_[pos_] + "'";
  }

  [[noreturn]] void fail(const std::string& expected) { throw ParseError(pos_, expected, describe_here()); }

  Expr expr()
  {
    Expr lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      lhs = Expr::binary(c == '+' ? NodeKind::Add : NodeKind::Subtract, lhs, term());
    }
  }

  Expr term()
  {
    Expr lhs = unary();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      lhs = Expr::binary(c == '*' ? NodeKind::Multiply : NodeKind::Divide, lhs, unary());
    }
  }

  Expr unary()
  {
    if (peek() == '-') {
      ++pos_;
      return Expr::negate(unary());
    }
    return power();
  }

  Expr power()
  {
    Expr base = primary();
    if (peek() == '^') {
      ++pos_;
      return Expr::binary(NodeKind::Power, base, unary());
    }
    return base;
  }

  Expr primary()
  {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      if (peek() != ')') fail("')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("operand");
  }

  BigInt digits(std::size_t& count)
  {
    BigInt v = 0;
    count = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
      ++count;
    }
    return v;
  }

  Expr number()
  {
    const std::size_t start = pos_;
    std::size_t n_int = 0, n_frac = 0;
    BigInt mantissa = digits(n_int);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      BigInt frac = digits(n_frac);
      mantissa = mantissa * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(n_frac)) + frac;
    }
    if (n_int + n_frac == 0) {
      pos_ = start;
      fail("digits");
    }
    long exponent = -static_cast<long>(n_frac);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) neg = text_[pos_++] == '-';
      std::size_t n_exp = 0;
      BigInt e = digits(n_exp);
      if (n_exp == 0 || e > 4000) fail("exponent digits");
      exponent += neg ? -e.convert_to<long>() : e.convert_to<long>();
    }
    Rational value(mantissa);
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
    if (exponent >= 0) value *= scale;
    else value /= scale;
    return Expr::constant(value);
  }

  Expr identifier()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();
    Function fn;
    if (name == "sin") fn = Function::Sin;
    else if (name == "cos") fn = Function::Cos;
    else if (name == "exp") fn = Function::Exp;
    else if (name == "ln") fn = Function::Ln;
    else if (name == "sqrt") fn = Function::Sqrt;
    else throw ParseError(start, "'x' or a function name", "identifier '" + std::string(name) + "'");
    if (peek() != '(') fail("'('");
    ++pos_;
    Expr arg = expr();
    if (peek() != ')') fail("')'");
    ++pos_;
    return Expr::call(fn, arg);
  }
};

} // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluation outside the natural domain; carries the failing subexpression.
class EvalError : public std::domain_error {
public:
  EvalError(const std::string& what, std::string subexpression)
      : std::domain_error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression))
  {
  }
  const std::string& subexpression() const noexcept { return subexpression_; }

private:
  std::string subexpression_;
};

/// The tree is not a rational function with integer powers.
class NotExactError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool is_natural_constant(const Expr& e)
{
  return e.kind() == NodeKind::Constant && is_integer(e.value()) && e.value() >= 0 && e.value() < 100000;
}

} // namespace detail

inline double eval(const Expr& e, double x)
{
  switch (e.kind()) {
  case NodeKind::Constant: return e.approx();
  case NodeKind::Variable: return x;
  case NodeKind::Negate: return -eval(e.child(0), x);
  case NodeKind::Add: return eval(e.child(0), x) + eval(e.child(1), x);
  case NodeKind::Subtract: return eval(e.child(0), x) - eval(e.child(1), x);
  case NodeKind::Multiply: return eval(e.child(0), x) * eval(e.child(1), x);
  case NodeKind::Divide: {
    const double num = eval(e.child(0), x);
    const double den = eval(e.child(1), x);
    if (den == 0.0) throw EvalError("division by zero", to_string(e));
    return num / den;
  }
  case NodeKind::Power: {
    const double base = eval(e.child(0), x);
    if (detail::is_natural_constant(e.child(1))) return std::pow(base, e.child(1).approx());
    if (!(base > 0.0)) throw EvalError("non-positive base under a non-natural exponent", to_string(e));
    return std::pow(base, eval(e.child(1), x));
  }
  case NodeKind::Call: {
    const double a = eval(e.child(0), x);
    switch (e.function()) {
    case Function::Sin: return std::sin(a);
    case Function::Cos: return std::cos(a);
    case Function::Exp: return std::exp(a);
    case Function::Ln:
      if (!(a > 0.0)) throw EvalError("logarithm of a non-positive argument", to_string(e));
      return std::log(a);
    case Function::Sqrt:
      if (a < 0.0) throw EvalError("square root of a negative argument", to_string(e));
      return std::sqrt(a);
    }
  }
  }
  throw std::logic_error("malformed expression node");
}

inline double Expr::operator()(double x) const { return eval(*this, x); }

/// Exact evaluation for rational functions with natural constant exponents.
inline Rational eval_exact(const Expr& e, const Rational& x)
{
  switch (e.kind()) {
  case NodeKind::Constant: return e.value();
  case NodeKind::Variable: return x;
  case NodeKind::Negate: return -eval_exact(e.child(0), x);
  case NodeKind::Add: return eval_exact(e.child(0), x) + eval_exact(e.child(1), x);
  case NodeKind::Subtract: return eval_exact(e.child(0), x) - eval_exact(e.child(1), x);
  case NodeKind::Multiply: return eval_exact(e.child(0), x) * eval_exact(e.child(1), x);
  case NodeKind::Divide: {
    Rational den = eval_exact(e.child(1), x);
    if (den == 0) throw EvalError("division by zero", to_string(e));
    return eval_exact(e.child(0), x) / den;
  }
  case NodeKind::Power:
    if (!detail::is_natural_constant(e.child(1)))
      throw NotExactError("exact evaluation needs a natural constant exponent: " + to_string(e));
    return ipow(eval_exact(e.child(0), x), e.child(1).value().convert_to<int>());
  case NodeKind::Call: throw NotExactError("exact evaluation of transcendental call: " + to_string(e));
  }
  throw std::logic_error("malformed expression node");
}

// ---------------------------------------------------------------------------
// Symbolic differentiation
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_const(const Expr& e, int v)
{
  return e.kind() == NodeKind::Constant && e.value() == v;
}

inline bool is_const(const Expr& e) { return e.kind() == NodeKind::Constant; }

// Constructors with constant folding and the identities 0+u, 1*u, u^1, u^0.
inline Expr neg(Expr u)
{
  if (is_const(u)) return Expr::constant(Rational(-u.value()));
  if (u.kind() == NodeKind::Negate) return u.child(0);
  return Expr::negate(std::move(u));
}

inline Expr add(Expr a, Expr b)
{
  if (is_const(a) && is_const(b)) return Expr::constant(Rational(a.value() + b.value()));
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  return Expr::binary(NodeKind::Add, std::move(a), std::move(b));
}

inline Expr sub(Expr a, Expr b)
{
  if (is_const(a) && is_const(b)) return Expr::constant(Rational(a.value() - b.value()));
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return neg(std::move(b));
  return Expr::binary(NodeKind::Subtract, std::move(a), std::move(b));
}

inline Expr mul(Expr a, Expr b)
{
  if (is_const(a) && is_const(b)) return Expr::constant(Rational(a.value() * b.value()));
  if (is_const(a, 0) || is_const(b, 0)) return Expr::constant(Rational(0));
  if (is_const(b)) std::swap(a, b);
  if (is_const(a, 1)) return b;
  if (is_const(a, -1)) return neg(std::move(b));
  return Expr::binary(NodeKind::Multiply, std::move(a), std::move(b));
}

inline Expr div(Expr a, Expr b)
{
  if (is_const(a) && is_const(b) && b.value() != 0) return Expr::constant(Rational(a.value() / b.value()));
  if (is_const(a, 0)) return a;
  if (is_const(b, 1)) return a;
  return Expr::binary(NodeKind::Divide, std::move(a), std::move(b));
}

inline Expr pow(Expr a, Expr b)
{
  if (is_const(b, 1)) return a;
  if (is_const(b, 0)) return Expr::constant(Rational(1));
  if (is_const(a) && is_natural_constant(b))
    return Expr::constant(ipow(a.value(), b.value().convert_to<int>()));
  return Expr::binary(NodeKind::Power, std::move(a), std::move(b));
}

inline Expr call(Function fn, Expr u) { return Expr::call(fn, std::move(u)); }

} // namespace detail

inline Expr symbolic_derivative(const Expr& e)
{
  using namespace detail;
  const auto d = [](const Expr& u) { return symbolic_derivative(u); };
  const auto one = [] { return Expr::constant(Rational(1)); };
  switch (e.kind()) {
  case NodeKind::Constant: return Expr::constant(Rational(0));
  case NodeKind::Variable: return one();
  case NodeKind::Negate: return neg(d(e.child(0)));
  case NodeKind::Add: return add(d(e.child(0)), d(e.child(1)));
  case NodeKind::Subtract: return sub(d(e.child(0)), d(e.child(1)));
  case NodeKind::Multiply: {
    const Expr& u = e.child(0);
    const Expr& v = e.child(1);
    return add(mul(d(u), v), mul(u, d(v)));
  }
  case NodeKind::Divide: {
    const Expr& u = e.child(0);
    const Expr& v = e.child(1);
    if (!depends_on_x(v)) return div(d(u), v);
    return div(sub(mul(d(u), v), mul(u, d(v))), pow(v, Expr::constant(Rational(2))));
  }
  case NodeKind::Power: {
    const Expr& u = e.child(0);
    const Expr& v = e.child(1);
    if (!depends_on_x(v)) return mul(mul(v, pow(u, sub(v, one()))), d(u));
    if (!depends_on_x(u)) return mul(mul(e, call(Function::Ln, u)), d(v));
    return mul(e, add(mul(d(v), call(Function::Ln, u)), div(mul(v, d(u)), u)));
  }
  case NodeKind::Call: {
    const Expr& u = e.child(0);
    switch (e.function()) {
    case Function::Sin: return mul(call(Function::Cos, u), d(u));
    case Function::Cos: return mul(neg(call(Function::Sin, u)), d(u));
    case Function::Exp: return mul(e, d(u));
    case Function::Ln: return div(d(u), u);
    case Function::Sqrt: return div(d(u), mul(Expr::constant(Rational(2)), e));
    }
  }
  }
  throw std::logic_error("malformed expression node");
}

inline Expr nth_derivative(const Expr& e, unsigned order)
{
  Expr r = e;
  for (unsigned i = 0; i < order; ++i) r = symbolic_derivative(r);
  return r;
}

/// (f(x+h) - f(x-h)) / 2h
inline double central_difference(const Expr& f, double x, double h)
{
  if (!(h > 0.0)) throw std::invalid_argument("central difference step must be positive");
  return (eval(f, x + h) - eval(f, x - h)) / (2.0 * h);
}

} // namespace qcalc
