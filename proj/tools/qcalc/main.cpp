// qcalc: q-calculus differentiation, interpolation and identity checks.

#include "qcalc/commands.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace qcalc;
using namespace qcalc::cli;

namespace {

void add_expression_options(CLI::App* sub, RunConfig& cfg, std::vector<std::string>& scheme, bool with_scheme)
{
  sub->add_option("--expr", cfg.expression, "Function of x, e.g. \"sin(x)*x\"")->required();
  sub->add_option("--at", cfg.points, "Evaluation point (repeatable)")->required()->allow_extra_args(false);
  if (!with_scheme) return;
  sub->add_option("--scheme", scheme.front(), "q+, q-, pq, qpow+, qpow-, pqpow")
      ->check(CLI::IsMember({"q+", "q-", "pq", "qpow+", "qpow-", "pqpow"}));
  sub->add_option("--q", cfg.q, "Base q of the (p,q) kinds");
  sub->add_option("--p", cfg.p, "Ignored by the limit commands, which drive p toward q");
  sub->add_option("--h0", cfg.limit.initial_offset, "Initial limit offset");
  sub->add_option("--rho", cfg.limit.shrink_ratio, "Offset shrink ratio in (0,1)");
  sub->add_option("--max-steps", cfg.limit.max_steps, "Maximum extrapolation samples");
  sub->add_option("--tol", cfg.limit.relative_tolerance, "Relative tolerance");
  sub->add_option("--side", scheme.back(), "Approach side of the (p,q) kinds: above or below")
      ->check(CLI::IsMember({"above", "below"}));
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"q-calculus differentiation and interpolation toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string out_path;
  std::vector<std::string> scheme = {"q+", "above"};
  std::string grid = "uniform";
  std::string variant = "U";

  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Output file (default: standard output)");
  app.fallthrough();

  auto* diff = app.add_subcommand("diff", "Derivative through a difference-quotient limit");
  add_expression_options(diff, cfg, scheme, true);

  auto* taylor = app.add_subcommand("taylor-diff", "Termwise operator derivative of a Taylor model");
  add_expression_options(taylor, cfg, scheme, true);
  taylor->add_option("--center", cfg.center, "Expansion center a");
  taylor->add_option("--order", cfg.order, "Model order N");
  taylor->add_option("--radius", cfg.radius, "Convergence radius (default unbounded)");
  taylor->add_flag("--analytic", cfg.analytic, "Treat f as analytic (tail-truncated series)");

  auto* interp = app.add_subcommand("interp", "Newton interpolation on uniform, geometric or power grids");
  add_expression_options(interp, cfg, scheme, false);
  interp->add_option("--grid", grid, "uniform, geometric or power")
      ->check(CLI::IsMember({"uniform", "geometric", "power"}));
  interp->add_option("--grid-a", cfg.grid_a, "Grid start / base a");
  interp->add_option("--grid-q", cfg.grid_q, "Grid ratio q");
  interp->add_option("--nodes", cfg.nodes, "Order K (K+1 nodes)");
  interp->add_flag("--literal", cfg.literal, "Also evaluate the experimental forward formula");

  auto* verify = app.add_subcommand("verify", "Exact identity sweep");
  verify->add_option("--x-min", cfg.x_min, "Smallest x")->capture_default_str();
  verify->add_option("--x-max", cfg.x_max, "Largest x")->capture_default_str();
  verify->add_option("--n-min", cfg.n_min, "Smallest n")->capture_default_str();
  verify->add_option("--n-max", cfg.n_max, "Largest n")->capture_default_str();

  auto* table = app.add_subcommand("table", "Expansion term table of x^n");
  table->add_option("--x", cfg.table_x, "Natural x >= 1")->capture_default_str();
  table->add_option("--n", cfg.table_n, "Exponent n >= 1")->capture_default_str();
  table->add_option("--variant", variant, "Index set U, S or C")->check(CLI::IsMember({"U", "S", "C"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.scheme = parse_scheme(scheme.front());
  cfg.limit.side = scheme.back() == "below" ? ApproachSide::Below : ApproachSide::Above;
  cfg.grid = parse_grid(grid);
  cfg.variant = parse_variant(variant);

  if (out_path.empty()) return run(cfg, std::cout, std::cerr);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kUsageError;
  }
  return run(cfg, file, std::cerr);
}
