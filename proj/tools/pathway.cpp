// pathway: command-line front end for scenario validation, management and
// investment solves, and tax/budget sweeps.
//
// Exit codes: 0 success, 1 usage or validation failure, 2 solver or output failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "pathway/investment.hpp"
#include "pathway/management.hpp"
#include "pathway/report.hpp"
#include "pathway/scenario_io.hpp"
#include "pathway/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kSolverFailure = 2;

// Raised for failures after the input has been accepted.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<pathway::Scenario> load(const std::string& file, bool quiet_warnings = false) {
  auto result = pathway::load_scenario(file);
  for (const auto& d : result.diagnostics) {
    if (d.severity == pathway::Severity::error || !quiet_warnings) {
      std::cerr << file << ": " << d.to_string() << '\n';
    }
  }
  return result.scenario;
}

void emit(const std::string& text, const std::string& destination) {
  if (destination.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    pathway::write_text_file(destination, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Techno-economic pathway analysis"};
  app.require_subcommand(1);

  std::string file, csv_out, dot_out, waste, tax_grid, budget_grid;
  bool assume_built = false, objective_invest = false;
  double budget = 0.0;
  std::int64_t node_limit = 1'000'000;
  unsigned threads = 0;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("file", file, "Scenario document")->required();

  auto* solve = app.add_subcommand("solve", "Solve the management model");
  solve->add_option("file", file, "Scenario document")->required();
  solve->add_flag("--assume-built", assume_built, "Treat every purchasable unit as installed");
  solve->add_option("--csv", csv_out, "Write results CSV here instead of stdout");
  solve->add_option("--dot", dot_out, "Write a Graphviz pathway diagram");

  auto* invest = app.add_subcommand("invest", "Solve the investment model");
  invest->add_option("file", file, "Scenario document")->required();
  invest->add_option("--budget", budget, "Investment budget")->required()->check(CLI::NonNegativeNumber);
  invest->add_flag("--objective-invest", objective_invest,
                   "Charge investment in the objective instead of a budget row");
  invest->add_option("--node-limit", node_limit, "Branch-and-bound node limit")
      ->check(CLI::PositiveNumber);
  invest->add_option("--csv", csv_out, "Write results CSV here instead of stdout");
  invest->add_option("--dot", dot_out, "Write a Graphviz pathway diagram");

  auto* sweep = app.add_subcommand("sweep", "Sweep the waste tax, optionally against budget");
  sweep->add_option("file", file, "Scenario document")->required();
  sweep->add_option("--waste", waste, "Waste product whose consumer bid is the tax")->required();
  sweep->add_option("--tax-grid", tax_grid, "lo:hi:n")->required();
  sweep->add_option("--budget-grid", budget_grid, "lo:hi:n, switches to the investment model");
  sweep->add_flag("--assume-built", assume_built, "Management sweep with all units installed");
  sweep->add_option("--threads", threads, "Worker threads (default: PATHWAY_THREADS or cores)");
  sweep->add_option("--csv", csv_out, "Write sweep CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (validate->parsed()) {
      auto scenario = load(file);
      if (!scenario) return kInvalid;
      std::cout << fmt::format("{}: ok ({} products, {} suppliers, {} consumers, {} technologies)\n",
                               file, scenario->products.size(), scenario->suppliers.size(),
                               scenario->consumers.size(), scenario->technologies.size());
      return kOk;
    }

    auto scenario = load(file, true);
    if (!scenario) return kInvalid;

    if (solve->parsed()) {
      const auto model = assume_built ? pathway::with_all_units_built(*scenario) : *scenario;
      const auto solution = pathway::solve_management(model);
      if (!solution.optimal()) {
        throw SolverFailure(fmt::format("management model is {}", to_string(solution.status)));
      }
      if (solution.degenerate) std::cerr << "note: degenerate solve, prices may not be unique\n";
      emit(pathway::solution_csv(model, solution), csv_out);
      if (!dot_out.empty()) pathway::write_text_file(dot_out, pathway::export_dot(model, &solution));
      return kOk;
    }

    if (invest->parsed()) {
      pathway::InvestmentOptions options;
      options.invest_in_objective = objective_invest;
      options.node_limit = node_limit;
      const auto result = pathway::solve_investment(*scenario, budget, options);
      if (!result.management.optimal()) {
        throw SolverFailure(
            fmt::format("investment model is {}", to_string(result.management.status)));
      }
      if (!result.proven_optimal) {
        std::cerr << fmt::format("warning: node limit reached after {} nodes, incumbent not proven\n",
                                 result.node_count);
      }
      std::cerr << fmt::format("objective {}, budget used {}, nodes {}\n",
                               pathway::format_number(result.objective),
                               pathway::format_number(result.budget_used), result.node_count);
      emit(pathway::investment_csv(*scenario, result), csv_out);
      if (!dot_out.empty()) {
        // Draw the built system: purchased units join the installed base.
        auto built = *scenario;
        for (std::size_t k = 0; k < built.technologies.size(); ++k) {
          built.technologies[k].existing_units += result.units[k];
        }
        pathway::write_text_file(dot_out, pathway::export_dot(built, &result.management));
      }
      return kOk;
    }

    if (sweep->parsed()) {
      std::vector<double> taxes, budgets;
      try {
        taxes = pathway::parse_grid(tax_grid);
        if (!budget_grid.empty()) budgets = pathway::parse_grid(budget_grid);
        pathway::with_tax(*scenario, waste, 0.0);
      } catch (const pathway::ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
      }
      pathway::SweepOptions options;
      options.assume_built = assume_built;
      options.threads = threads;
      const auto table =
          budgets.empty() ? pathway::sweep_tax(*scenario, waste, taxes, options)
                          : pathway::sweep_tax_budget(*scenario, waste, taxes, budgets, options);
      std::size_t failed = 0;
      for (const auto& p : table.points) failed += p.optimal ? 0 : 1;
      emit(pathway::sweep_csv(table), csv_out);
      if (budgets.empty()) {
        for (const auto& run : pathway::detect_breakpoints(table)) {
          std::string set;
          for (const auto& id : run.active_set) set += (set.empty() ? "" : ",") + id;
          std::cerr << fmt::format("tax {} .. {}: {{{}}}\n", pathway::format_number(run.from),
                                   pathway::format_number(run.to), set);
        }
      }
      if (failed > 0) {
        throw SolverFailure(fmt::format("{} grid cells did not solve to proven optimality", failed));
      }
      return kOk;
    }
  } catch (const pathway::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kInvalid;
}
