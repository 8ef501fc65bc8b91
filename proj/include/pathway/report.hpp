#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pathway/investment.hpp"
#include "pathway/management.hpp"
#include "pathway/sweep.hpp"

namespace pathway {

/// 12 significant digits, "-0" folded to "0", "inf"/"-inf"/"nan" spelled out.
std::string format_number(double value);

/// Long format: element_id,kind,allocation,price_or_blank,profit. Price is the
/// product price for suppliers and consumers and π_k for technologies; blank
/// when the solve was not optimal.
std::string solution_csv(const Scenario& scenario, const ManagementSolution& solution);

/// solution_csv plus a units_purchased column.
std::string investment_csv(const Scenario& scenario, const InvestmentSolution& solution);

/// tax,budget,emissions,utility_cost,surplus,active_set,price_<product>...
/// One row per point in grid order; budget reads "unlimited" for management sweeps.
std::string sweep_csv(const SweepTable& table);

struct DotOptions {
  std::string graph_name = "pathway";
  std::optional<double> activity_tol;  // defaults to default_activity_tol
};

/// Graphviz digraph of products (ellipses) and elements (boxes). With a
/// solution, edges carry flows, products carry prices and inactive elements
/// are drawn gray. Throws ModelError if the solution does not fit the scenario.
std::string export_dot(const Scenario& scenario, const ManagementSolution* solution = nullptr,
                       const DotOptions& options = {});

/// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pathway
