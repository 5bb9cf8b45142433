#pragma once

#include "qcalc/qcalc.hpp"

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcalc::cli {

enum class OutputFormat { Csv, Json };

enum ExitCode : int { kSuccess = 0, kComputationFailure = 1, kUsageError = 2 };

/// Everything a single command-line run needs.
struct RunConfig {
  std::string subcommand;
  std::string expression;
  std::vector<double> points;

  SchemeKind scheme = SchemeKind::QForward;
  double q = 1.0;
  double p = 1.0;
  LimitSpec limit;

  double center = 0.0;
  unsigned order = 5;
  double radius = std::numeric_limits<double>::infinity();
  bool analytic = false;

  GridSpec::Kind grid = GridSpec::Kind::Uniform;
  double grid_a = 0.0;
  double grid_q = 2.0;
  unsigned nodes = 2;
  bool literal = false;

  unsigned x_min = 1, x_max = 30;
  unsigned n_min = 1, n_max = 8;

  unsigned table_x = 10;
  unsigned table_n = 3;
  SetVariant variant = SetVariant::U;

  OutputFormat format = OutputFormat::Csv;
};

/// Bad flags or inadmissible inputs; maps to exit code 2.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

SchemeKind parse_scheme(const std::string& name);
GridSpec::Kind parse_grid(const std::string& name);
SetVariant parse_variant(const std::string& name);

/// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

int cmd_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_taylor_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_interp(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatch on cfg.subcommand.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace qcalc::cli
