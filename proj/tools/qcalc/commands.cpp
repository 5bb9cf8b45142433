#include "qcalc/commands.hpp"

#include "json.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <utility>
#include <variant>

namespace qcalc::cli {

namespace {

using Field = std::variant<double, std::int64_t, bool, std::string>;
using Record = std::vector<std::pair<std::string, Field>>;
using Json = nlohmann::ordered_json;

std::string csv_escape(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string field_text(const Field& f)
{
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) return format_number(v);
        else if constexpr (std::is_same_v<V, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      f);
}

Json field_json(const Field& f)
{
  return std::visit([](const auto& v) { return Json(v); }, f);
}

void write_csv(std::ostream& out, const std::vector<Record>& records, const std::vector<std::string>& header)
{
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << field_text(r[i].second);
    out << '\n';
  }
}

Json records_json(const std::vector<Record>& records)
{
  Json arr = Json::array();
  for (const auto& r : records) {
    Json obj = Json::object();
    for (const auto& [key, value] : r) obj[key] = field_json(value);
    arr.push_back(std::move(obj));
  }
  return arr;
}

void emit(std::ostream& out, OutputFormat format, const std::vector<Record>& records,
          const std::vector<std::string>& header)
{
  if (format == OutputFormat::Csv) write_csv(out, records, header);
  else out << records_json(records).dump(2) << '\n';
}

Expr parse_or_usage(const std::string& text)
{
  if (text.empty()) throw UsageError("--expr is required");
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

// Runs body; maps exceptions to exit codes with a message on err.
int guarded(std::ostream& err, const std::function<int()>& body)
{
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationFailure;
  }
}

void validate_limit(const LimitSpec& spec)
{
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

DifferenceScheme scheme_of(const RunConfig& cfg) { return DifferenceScheme::of(cfg.scheme, cfg.q, cfg.p); }

LimitSpec limit_of(const RunConfig& cfg)
{
  LimitSpec spec = cfg.limit;
  validate_limit(spec);
  return spec;
}

const std::vector<std::string> kDiffHeader = {"x",     "scheme",    "value",        "error_estimate",
                                              "steps", "converged", "oracle_value", "oracle_delta"};

} // namespace

std::string format_number(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SchemeKind parse_scheme(const std::string& name)
{
  if (name == "q+") return SchemeKind::QForward;
  if (name == "q-") return SchemeKind::QBackward;
  if (name == "pq") return SchemeKind::PQ;
  if (name == "qpow+") return SchemeKind::QPowerForward;
  if (name == "qpow-") return SchemeKind::QPowerBackward;
  if (name == "pqpow") return SchemeKind::PQPower;
  throw UsageError("unknown scheme '" + name + "'");
}

GridSpec::Kind parse_grid(const std::string& name)
{
  if (name == "uniform") return GridSpec::Kind::Uniform;
  if (name == "geometric") return GridSpec::Kind::Geometric;
  if (name == "power") return GridSpec::Kind::PowerTower;
  throw UsageError("unknown grid '" + name + "'");
}

SetVariant parse_variant(const std::string& name)
{
  if (name == "U") return SetVariant::U;
  if (name == "S") return SetVariant::S;
  if (name == "C") return SetVariant::C;
  throw UsageError("unknown set variant '" + name + "'");
}

// ---------------------------------------------------------------------------

int cmd_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    const Expr f = parse_or_usage(cfg.expression);
    const DifferenceScheme scheme = scheme_of(cfg);
    const LimitSpec spec = limit_of(cfg);
    if (cfg.points.empty()) throw UsageError("at least one --at point is required");
    for (double x : cfg.points)
      if (auto issue = scheme.point_issue(x); !issue.empty()) throw UsageError(issue);

    const Expr df = symbolic_derivative(f);
    std::vector<Record> records;
    bool all_converged = true;
    for (double x : cfg.points) {
      const ExtrapolationResult r = derivative_estimate(f, x, scheme, spec);
      const double oracle = eval(df, scheme.limit_point(x));
      all_converged = all_converged && r.converged;
      records.push_back({{"x", x},
                         {"scheme", std::string(scheme_name(scheme.kind))},
                         {"value", r.value},
                         {"error_estimate", r.error_estimate},
                         {"steps", std::int64_t(r.steps)},
                         {"converged", r.converged},
                         {"oracle_value", oracle},
                         {"oracle_delta", r.value - oracle}});
    }
    emit(out, cfg.format, records, kDiffHeader);
    return all_converged ? kSuccess : kComputationFailure;
  });
}

int cmd_taylor_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    const Expr f = parse_or_usage(cfg.expression);
    const DifferenceScheme scheme = scheme_of(cfg);
    const LimitSpec spec = limit_of(cfg);
    if (cfg.points.empty()) throw UsageError("at least one --at point is required");
    if (!(cfg.radius > 0.0)) throw UsageError("--radius must be positive");

    std::optional<TaylorModel> model;
    try {
      model.emplace(taylor_from_expr(f, cfg.center, cfg.order, cfg.radius,
                                     cfg.analytic ? Smoothness::analytic() : Smoothness::finite(cfg.order)));
    } catch (const TaylorConstructionError& e) {
      throw UsageError(e.what());
    }
    for (double x0 : cfg.points) {
      if (!model->in_radius(x0)) throw UsageError("x0=" + format_number(x0) + " lies outside the model radius");
    }

    const Expr df = symbolic_derivative(f);
    std::vector<Record> records;
    bool all_converged = true;
    for (double x0 : cfg.points) {
      TaylorDerivative r;
      try {
        r = taylor_derivative_via_operator(*model, x0, scheme, spec);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const double oracle = eval(df, x0);
      all_converged = all_converged && r.limit.converged;
      records.push_back({{"x0", x0},
                         {"scheme", std::string(scheme_name(scheme.kind))},
                         {"value", r.limit.value},
                         {"error_estimate", r.limit.error_estimate},
                         {"steps", std::int64_t(r.limit.steps)},
                         {"converged", r.limit.converged},
                         {"oracle_value", oracle},
                         {"oracle_delta", r.limit.value - oracle},
                         {"xi_route", r.xi_route},
                         {"terms_used", std::int64_t(r.terms_used)},
                         {"warning", r.warning.value_or("")}});
    }

    const auto& coeffs = model->coefficients();
    if (cfg.format == OutputFormat::Csv) {
      out << "center,order,radius\n"
          << format_number(model->center()) << ',' << model->order() << ',' << format_number(model->radius())
          << "\n\n";
      out << "k,coefficient\n";
      for (std::size_t k = 0; k < coeffs.size(); ++k) out << k << ',' << format_number(coeffs[k]) << '\n';
      out << '\n';
      write_csv(out, records,
                {"x0", "scheme", "value", "error_estimate", "steps", "converged", "oracle_value", "oracle_delta",
                 "xi_route", "terms_used", "warning"});
    } else {
      Json doc = Json::object();
      doc["model"]["center"] = model->center();
      doc["model"]["order"] = model->order();
      doc["model"]["radius"] = model->bounded() ? Json(model->radius()) : Json(nullptr);
      doc["model"]["coefficients"] = coeffs;
      doc["records"] = records_json(records);
      out << doc.dump(2) << '\n';
    }
    return all_converged ? kSuccess : kComputationFailure;
  });
}

int cmd_interp(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    const Expr f = parse_or_usage(cfg.expression);
    if (cfg.points.empty()) throw UsageError("at least one --at point is required");
    const GridSpec grid{cfg.grid, cfg.grid_a, cfg.grid_q, cfg.nodes};
    try {
      grid.nodes();
    } catch (const DegenerateGrid& e) {
      throw UsageError(e.what());
    }

    std::vector<Record> records;
    for (double x : cfg.points) {
      const double value = divided_difference_interpolate(grid, f, x);
      const double fx = eval(f, x);
      Record r{{"x", x}, {"value", value}, {"f_x", fx}, {"residual", value - fx}};
      if (cfg.literal) {
        double literal_value = 0.0;
        switch (cfg.grid) {
        case GridSpec::Kind::Uniform: {
          std::vector<double> samples;
          for (double node : grid.nodes()) samples.push_back(eval(f, node));
          literal_value = newton_forward_eval(forward_difference_table(samples, cfg.nodes), cfg.grid_a, x, cfg.nodes);
          break;
        }
        case GridSpec::Kind::Geometric:
          literal_value = literal_q_newton_eval(f, cfg.grid_a, x, cfg.grid_q, cfg.nodes).value;
          break;
        case GridSpec::Kind::PowerTower:
          literal_value = literal_qpower_newton_eval(f, cfg.grid_a, x, cfg.grid_q, cfg.nodes).value;
          break;
        }
        r.emplace_back("literal_value", literal_value);
        r.emplace_back("literal_residual_vs_sound", literal_value - value);
      }
      records.push_back(std::move(r));
    }
    std::vector<std::string> header = {"x", "value", "f_x", "residual"};
    if (cfg.literal) {
      header.push_back("literal_value");
      header.push_back("literal_residual_vs_sound");
    }
    emit(out, cfg.format, records, header);
    return kSuccess;
  });
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct VerifySink {
  std::vector<Record> records;
  bool all_pass = true;

  void check(const std::string& identity, const std::string& inputs, const Rational& expected, const Rational& got)
  {
    add(identity, inputs, to_string(expected), to_string(got), expected == got);
  }

  void add(const std::string& identity, const std::string& inputs, std::string expected, std::string got, bool pass)
  {
    all_pass = all_pass && pass;
    records.push_back({{"identity", identity},
                       {"inputs", inputs},
                       {"expected", std::move(expected)},
                       {"got", std::move(got)},
                       {"pass", pass}});
  }
};

Rational pow_r(const Rational& b, unsigned e) { return ipow(b, static_cast<int>(e)); }

void verify_cell(VerifySink& sink, unsigned x, unsigned n)
{
  const std::string cell = "x=" + std::to_string(x) + ";n=" + std::to_string(n);
  const Rational rx(x);
  const Rational xn = pow_r(rx, n);

  for (SetVariant v : {SetVariant::U, SetVariant::S, SetVariant::C})
    sink.check(std::string("expansion_") + variant_name(v), cell, xn, power_via_expansion(x, n, v));

  const auto terms = power_expansion_terms(x, n, SetVariant::C);
  std::string asym;
  for (unsigned k = 0; k <= x && asym.empty(); ++k)
    if (terms.terms[k] != terms.terms[x - k]) asym = "asymmetric at k=" + std::to_string(k);
  sink.add("expansion_symmetry", cell, "symmetric", asym.empty() ? "symmetric" : asym, asym.empty());
  sink.check("expansion_boundary", cell, terms.terms.front(), terms.terms.back());

  for (const Rational& t : {Rational(0), Rational(1), Rational(1, 2), Rational(3), Rational(7, 5)})
    sink.check("xi", cell + ";t=" + to_string(t), pow_r(rx * t, n), xi(x, t, n));

  sink.check("telescoping", cell, xn, Rational(telescoping_power_sum(x, n)));
  sink.check("telescoping_literal_deviation", cell, pow_r(rx + 1, n) - 1, Rational(telescoping_power_sum(x, n, true)));

  const Rational delta = pow_r(rx + 1, n) - xn;
  sink.check("binomial_growth_expansion", cell + ";dx=1", delta, binomial_growth_expansion(rx, Rational(1), n));
  sink.check("forward_difference_power", cell, delta, forward_difference_power(rx, n));

  const auto monomial = [n](const Rational& v) { return pow_r(v, n); };
  for (const Rational& q : {Rational(1, 2), Rational(2)})
    sink.check("q_closed_form", cell + ";q=" + to_string(q), q_difference(monomial, rx, q),
               q_derivative_power_closed_form(rx, n, q));
  if (x >= 2) {
    for (const Rational& q : {Rational(2), Rational(3)})
      sink.check("q_power_closed_form", cell + ";q=" + to_string(q), q_power_difference(monomial, rx, q),
                 q_power_difference_power_closed_form(rx, n, q));
  }

  {
    const Rational q(11, 10);
    Rational geometric = 0;
    for (unsigned k = 0; k < n; ++k) geometric += pow_r(q, k);
    sink.check("xi_q_quotient", cell + ";q=11/10", pow_r(rx, n - 1) * geometric, xi_q_quotient(x, n, q));
  }

  for (unsigned k = 1; k <= n; ++k) {
    const std::string in = cell + ";k=" + std::to_string(k);
    const Rational corrected = Rational(factorial(n) / factorial(n - k)) * pow_r(rx, n - k);
    const Rational deviated = Rational(factorial(n + 1) / factorial(n - k + 1)) * pow_r(rx, n - k);
    sink.check("high_order_corrected", in, corrected, q_derivative_power_high_order(rx, n, k, Rational(1)));
    sink.check("high_order_literal_deviation", in, deviated,
               q_derivative_power_high_order(rx, n, k, Rational(1), true));
  }
}

} // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    if (cfg.x_min < 1 || cfg.x_min > cfg.x_max) throw UsageError("x sweep needs 1 <= x-min <= x-max");
    if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) throw UsageError("n sweep needs 1 <= n-min <= n-max");
    if (cfg.x_max > 1000 || cfg.n_max > 64) throw UsageError("sweep too large (x <= 1000, n <= 64)");
    VerifySink sink;
    for (unsigned x = cfg.x_min; x <= cfg.x_max; ++x)
      for (unsigned n = cfg.n_min; n <= cfg.n_max; ++n) verify_cell(sink, x, n);
    emit(out, cfg.format, sink.records, {"identity", "inputs", "expected", "got", "pass"});
    if (!sink.all_pass) err << "error: identity failures present\n";
    return sink.all_pass ? kSuccess : kComputationFailure;
  });
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    if (cfg.table_x < 1) throw UsageError("--x must be >= 1");
    if (cfg.table_n < 1) throw UsageError("--n must be >= 1");
    if (cfg.table_x > 1000000) throw UsageError("--x too large");
    const auto list = power_expansion_terms(cfg.table_x, cfg.table_n, cfg.variant);
    const Rational total = power_via_expansion(cfg.table_x, cfg.table_n, cfg.variant);
    if (cfg.format == OutputFormat::Csv) {
      out << "k,term\n";
      for (std::size_t i = 0; i < list.terms.size(); ++i) out << list.k_at(i) << ',' << to_string(list.terms[i]) << '\n';
      out << "TOTAL," << to_string(total) << '\n';
    } else {
      Json doc = Json::object();
      doc["x"] = cfg.table_x;
      doc["n"] = cfg.table_n;
      doc["variant"] = variant_name(cfg.variant);
      Json rows = Json::array();
      for (std::size_t i = 0; i < list.terms.size(); ++i)
        rows.push_back(Json{{"k", list.k_at(i)}, {"term", to_string(list.terms[i])}});
      doc["rows"] = std::move(rows);
      doc["total"] = to_string(total);
      out << doc.dump(2) << '\n';
    }
    return kSuccess;
  });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  if (cfg.subcommand == "diff") return cmd_diff(cfg, out, err);
  if (cfg.subcommand == "taylor-diff") return cmd_taylor_diff(cfg, out, err);
  if (cfg.subcommand == "interp") return cmd_interp(cfg, out, err);
  if (cfg.subcommand == "verify") return cmd_verify(cfg, out, err);
  if (cfg.subcommand == "table") return cmd_table(cfg, out, err);
  err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
  return kUsageError;
}

} // namespace qcalc::cli
