#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathway/investment.hpp"
#include "pathway/model.hpp"

namespace pathway {

/// `n` evenly spaced values from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, int n);

/// Parses "lo:hi:n". Throws ModelError on malformed text or n < 1.
std::vector<double> parse_grid(const std::string& text);

struct SweepPoint {
  double tax = 0.0;
  std::optional<double> budget;  // empty: management model, no budget
  double emissions = 0.0;
  double utility_cost = 0.0;
  double surplus = 0.0;
  Eigen::VectorXd prices;
  std::vector<std::string> active_set;  // sorted technology ids
  std::vector<int> units;               // purchased units, investment sweeps only
  bool optimal = true;
  bool degenerate = false;
};

/// Row-major grid: tax outer, budget inner.
struct SweepTable {
  std::string fingerprint;
  std::string waste_product;
  std::vector<double> taxes;
  std::vector<double> budgets;  // empty for management sweeps
  std::vector<std::string> product_ids;
  std::vector<SweepPoint> points;

  std::size_t budget_count() const { return budgets.empty() ? 1 : budgets.size(); }
  const SweepPoint& at(std::size_t tax_index, std::size_t budget_index = 0) const {
    return points.at(tax_index * budget_count() + budget_index);
  }
  /// The tax sweep at one budget level, as a one-dimensional table.
  SweepTable budget_column(std::size_t budget_index) const;
};

struct SweepOptions {
  /// Management sweeps treat every purchasable unit as installed.
  bool assume_built = false;
  std::optional<double> activity_tol;
  /// Worker threads; 0 reads PATHWAY_THREADS, then falls back to the core count.
  unsigned threads = 0;
  InvestmentOptions investment;
};

/// Sets the bid of the waste product's single consumer to −tax and solves the
/// management model at each grid value.
SweepTable sweep_tax(const Scenario& scenario, const std::string& waste_product,
                     const std::vector<double>& taxes, const SweepOptions& options = {});

/// Solves the investment model at every (tax, budget) cell.
SweepTable sweep_tax_budget(const Scenario& scenario, const std::string& waste_product,
                            const std::vector<double>& taxes, const std::vector<double>& budgets,
                            const SweepOptions& options = {});

/// Copy of the scenario with the waste consumer's bid set to −tax. Throws
/// ModelError unless the product exists, is flagged as waste and has exactly
/// one consumer.
Scenario with_tax(const Scenario& scenario, const std::string& waste_product, double tax);

struct PathwayInterval {
  double from = 0.0;  // swept value of the first point in the run
  double to = 0.0;    // swept value of the last point in the run
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<std::string> active_set;
};

/// Maximal runs of consecutive points sharing an active set. Requires a
/// one-dimensional table (use budget_column for tax×budget sweeps); throws
/// ModelError on an empty table.
std::vector<PathwayInterval> detect_breakpoints(const SweepTable& table);

}  // namespace pathway
