#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathway/lp.hpp"
#include "pathway/management.hpp"
#include "pathway/model.hpp"

namespace pathway {

struct InvestmentOptions {
  /// Charge β_k y_k in the objective instead of enforcing a budget row.
  bool invest_in_objective = false;
  double gap_tol = 0.0;
  std::int64_t node_limit = 1'000'000;
  Tolerances<double> lp_tol;
};

/// LP relaxation of the investment model plus the bookkeeping needed to
/// branch on it.
///
/// Column layout: [s | d | t | y | link slack | budget slack]. Every
/// technology with max_units > 0 owns one integer column y and one row
///   t_k − cap_k y_k + w_k = cap_k existing_k,
/// which is t_k <= cap_k (existing_k + y_k) in equality form.
struct InvestmentMilp {
  LinearProgram<double> relaxation;
  std::vector<std::size_t> integer_technologies;  // scenario index per integer column
  std::vector<Eigen::Index> integer_columns;
  std::vector<Eigen::Index> linking_rows;
  std::optional<Eigen::Index> budget_row;
  double budget = 0.0;
  bool invest_in_objective = false;
};

InvestmentMilp build_investment_milp(const Scenario& scenario, double budget,
                                     bool invest_in_objective = false);

struct InvestmentSolution {
  std::vector<int> units;  // purchased units per technology, scenario order
  ManagementSolution management;
  double objective = 0.0;    // surplus, net of Σ β y when investment is charged
  double budget_used = 0.0;  // Σ β_k y_k
  double budget_limit = 0.0;
  double root_bound = 0.0;   // LP relaxation at the root
  std::int64_t node_count = 0;
  bool proven_optimal = true;

  int units_of(const Scenario& scenario, const std::string& technology_id) const;
};

/// Branch-and-bound on unit counts. Best-bound node order (newest first on
/// ties), most-fractional branching with ties broken by technology order;
/// nodes whose relaxation bound does not beat the incumbent by more than
/// gap_tol are pruned.
InvestmentSolution solve_investment(const Scenario& scenario, double budget,
                                    const InvestmentOptions& options = {});

/// Exhaustive oracle: solves the management model for every unit vector within
/// bounds and budget. Keeps the lexicographically first best vector. Throws
/// ModelError if the number of vectors exceeds enumeration_cap.
InvestmentSolution brute_force_investment(const Scenario& scenario, double budget,
                                          std::int64_t enumeration_cap = 65'536,
                                          const InvestmentOptions& options = {});

/// Management solve with `units` added to the installed base.
ManagementSolution solve_with_units(const Scenario& scenario, const std::vector<int>& units,
                                    const Tolerances<double>& tol = Tolerances<double>{});

}  // namespace pathway
