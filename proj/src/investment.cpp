#include "pathway/investment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <queue>

#include <fmt/core.h>

#include "pathway/simplex.hpp"

namespace pathway {

namespace {

constexpr double kIntegrality = 1e-6;

double relative_eps(double value) { return 1e-9 * (1.0 + std::abs(value)); }

}  // namespace

InvestmentMilp build_investment_milp(const Scenario& scenario, double budget,
                                     bool invest_in_objective) {
  if (!(budget >= 0.0)) throw ModelError("budget must be >= 0");
  const LinearProgram<double> base = build_management_lp(scenario);

  const Eigen::Index ns = scenario.suppliers.size();
  const Eigen::Index nd = scenario.consumers.size();
  const Eigen::Index nt = scenario.technologies.size();
  const Eigen::Index np = scenario.products.size();
  const Eigen::Index tech_offset = ns + nd;

  InvestmentMilp milp;
  milp.budget = budget;
  milp.invest_in_objective = invest_in_objective;
  for (Eigen::Index k = 0; k < nt; ++k) {
    if (scenario.technologies[k].max_units > 0) milp.integer_technologies.push_back(k);
  }
  const Eigen::Index ny = milp.integer_technologies.size();
  const bool with_budget = !invest_in_objective;

  const Eigen::Index num_vars = base.num_vars() + 2 * ny + (with_budget ? 1 : 0);
  const Eigen::Index num_rows = np + ny + (with_budget ? 1 : 0);
  LinearProgram<double> lp(num_rows, num_vars);

  lp.objective.head(base.num_vars()) = base.objective;
  lp.upper.head(base.num_vars()) = base.upper;
  std::copy(base.var_labels.begin(), base.var_labels.end(), lp.var_labels.begin());
  std::copy(base.row_labels.begin(), base.row_labels.end(), lp.row_labels.begin());

  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index j = 0; j < base.num_vars(); ++j) {
    for (SparseMatrix<double>::InnerIterator it(base.rows, j); it; ++it) {
      entries.emplace_back(it.row(), j, it.value());
    }
  }

  for (Eigen::Index q = 0; q < ny; ++q) {
    const auto k = static_cast<Eigen::Index>(milp.integer_technologies[q]);
    const auto& tech = scenario.technologies[k];
    const Eigen::Index t_col = tech_offset + k;
    const Eigen::Index y_col = base.num_vars() + q;
    const Eigen::Index w_col = base.num_vars() + ny + q;
    const Eigen::Index row = np + q;

    lp.upper[t_col] = tech.potential_capacity();
    lp.upper[y_col] = tech.max_units;
    lp.upper[w_col] = tech.potential_capacity();
    lp.var_labels[y_col] = "units:" + tech.id;
    lp.var_labels[w_col] = "spare:" + tech.id;
    lp.row_labels[row] = "capacity:" + tech.id;
    if (invest_in_objective) lp.objective[y_col] = -tech.invest_cost;

    entries.emplace_back(row, t_col, 1.0);
    if (tech.capacity_per_unit != 0.0) entries.emplace_back(row, y_col, -tech.capacity_per_unit);
    entries.emplace_back(row, w_col, 1.0);
    lp.rhs[row] = tech.installed_capacity();

    milp.integer_columns.push_back(y_col);
    milp.linking_rows.push_back(row);
  }

  if (with_budget) {
    const Eigen::Index row = np + ny;
    const Eigen::Index w_col = num_vars - 1;
    for (Eigen::Index q = 0; q < ny; ++q) {
      const double cost = scenario.technologies[milp.integer_technologies[q]].invest_cost;
      if (cost != 0.0) entries.emplace_back(row, milp.integer_columns[q], cost);
    }
    entries.emplace_back(row, w_col, 1.0);
    lp.rhs[row] = budget;
    lp.upper[w_col] = budget;
    lp.var_labels[w_col] = "budget:unspent";
    lp.row_labels[row] = "budget";
    milp.budget_row = row;
  }
  lp.rows.setFromTriplets(entries.begin(), entries.end());
  milp.relaxation = std::move(lp);
  return milp;
}

ManagementSolution solve_with_units(const Scenario& scenario, const std::vector<int>& units,
                                    const Tolerances<double>& tol) {
  if (units.size() != scenario.technologies.size()) {
    throw ModelError("unit vector size does not match the scenario");
  }
  Scenario installed = scenario;
  for (std::size_t k = 0; k < units.size(); ++k) {
    installed.technologies[k].existing_units += units[k];
  }
  return solve_management(installed, tol);
}

int InvestmentSolution::units_of(const Scenario& scenario, const std::string& technology_id) const {
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    if (scenario.technologies[k].id == technology_id) return units.at(k);
  }
  throw ModelError(fmt::format("unknown technology '{}'", technology_id));
}

namespace {

double investment_cost(const Scenario& scenario, const std::vector<int>& units) {
  double cost = 0.0;
  for (std::size_t k = 0; k < units.size(); ++k) {
    cost += scenario.technologies[k].invest_cost * units[k];
  }
  return cost;
}

struct Candidate {
  std::vector<int> units;
  ManagementSolution management;
  double objective = -std::numeric_limits<double>::infinity();
};

Candidate evaluate(const Scenario& scenario, std::vector<int> units,
                   const InvestmentOptions& options) {
  Candidate c;
  c.management = solve_with_units(scenario, units, options.lp_tol);
  c.objective = c.management.surplus;
  if (options.invest_in_objective) c.objective -= investment_cost(scenario, units);
  c.units = std::move(units);
  return c;
}

InvestmentSolution finish(const Scenario& scenario, Candidate best, double budget,
                          const InvestmentOptions& options) {
  InvestmentSolution out;
  out.budget_used = investment_cost(scenario, best.units);
  out.budget_limit =
      options.invest_in_objective ? std::numeric_limits<double>::infinity() : budget;
  out.objective = best.objective;
  out.units = std::move(best.units);
  out.management = std::move(best.management);
  return out;
}

struct Node {
  Eigen::VectorXd lower;  // bounds on integer columns only
  Eigen::VectorXd upper;
  double parent_bound;
  std::int64_t sequence;
};

// Best parent bound first; among equal bounds the newest node, so ties dive
// like a depth-first search.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound < b.parent_bound;
    return a.sequence < b.sequence;
  }
};

}  // namespace

InvestmentSolution solve_investment(const Scenario& scenario, double budget,
                                    const InvestmentOptions& options) {
  InvestmentMilp milp = build_investment_milp(scenario, budget, options.invest_in_objective);
  const auto ny = static_cast<Eigen::Index>(milp.integer_columns.size());
  LinearProgram<double>& lp = milp.relaxation;

  Candidate incumbent = evaluate(scenario, std::vector<int>(scenario.technologies.size(), 0), options);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t sequence = 0;
  {
    Node root{Eigen::VectorXd::Zero(ny), Eigen::VectorXd(ny),
              std::numeric_limits<double>::infinity(), sequence++};
    for (Eigen::Index q = 0; q < ny; ++q) root.upper[q] = lp.upper[milp.integer_columns[q]];
    open.push(std::move(root));
  }

  std::int64_t nodes = 0;
  bool proven = true;
  double root_bound = incumbent.objective;

  while (!open.empty()) {
    if (nodes >= options.node_limit) {
      proven = false;
      break;
    }
    Node node = open.top();
    open.pop();
    // Bounds only fall with depth, so once the best open node cannot beat the
    // incumbent nothing can.
    if (node.parent_bound <=
        incumbent.objective + options.gap_tol + relative_eps(incumbent.objective)) {
      break;
    }
    for (Eigen::Index q = 0; q < ny; ++q) {
      lp.lower[milp.integer_columns[q]] = node.lower[q];
      lp.upper[milp.integer_columns[q]] = node.upper[q];
    }
    const auto relaxed = solve_lp(lp, options.lp_tol);
    ++nodes;
    if (relaxed.status != LpStatus::optimal) continue;

    const double bound = relaxed.objective_value;
    if (nodes == 1) root_bound = bound;
    // Tightening bounds can only shrink the relaxation.
    assert(bound <= node.parent_bound + relative_eps(node.parent_bound));
    if (bound <= incumbent.objective + options.gap_tol + relative_eps(incumbent.objective)) {
      continue;
    }

    // Units whose capacity the relaxation leaves idle can drop to what the
    // throughput needs; budget and objective stay feasible and unchanged, so
    // this is an optimal point of the same relaxation.
    Eigen::VectorXd needed(ny);
    for (Eigen::Index q = 0; q < ny; ++q) {
      const auto& tech = scenario.technologies[milp.integer_technologies[q]];
      const double bought = std::clamp(relaxed.x[milp.integer_columns[q]], node.lower[q], node.upper[q]);
      double used = node.lower[q];
      if (tech.capacity_per_unit > 0.0) {
        const double t = relaxed.x[scenario.suppliers.size() + scenario.consumers.size() +
                                   milp.integer_technologies[q]];
        used = t / tech.capacity_per_unit - tech.existing_units;
      }
      // Slack in the objective means the unit is not free; keep the LP value.
      const bool charged = options.invest_in_objective && tech.invest_cost > 0.0;
      needed[q] = charged ? bought : std::clamp(used, node.lower[q], bought);
    }
    Eigen::Index branch = -1;
    double most = kIntegrality;
    for (Eigen::Index q = 0; q < ny; ++q) {
      const double value = needed[q];
      const double distance = std::abs(value - std::round(value));
      if (distance > most + 1e-12) {
        most = distance;
        branch = q;
      }
    }

    if (branch < 0) {
      std::vector<int> units(scenario.technologies.size(), 0);
      for (Eigen::Index q = 0; q < ny; ++q) {
        units[milp.integer_technologies[q]] = static_cast<int>(std::lround(needed[q]));
      }
      Candidate c = evaluate(scenario, std::move(units), options);
      assert(c.objective <= bound + relative_eps(bound));
      if (c.objective > incumbent.objective + relative_eps(incumbent.objective)) {
        incumbent = std::move(c);
      }
      continue;
    }

    const double value = needed[branch];
    Node down{node.lower, node.upper, bound, 0};
    Node up{node.lower, node.upper, bound, 0};
    down.upper[branch] = std::floor(value);
    up.lower[branch] = std::ceil(value);
    // The child nearer to the relaxed value is explored first.
    const bool down_first = value - std::floor(value) < 0.5;
    Node& first = down_first ? down : up;
    Node& second = down_first ? up : down;
    second.sequence = sequence++;
    first.sequence = sequence++;
    open.push(std::move(second));
    open.push(std::move(first));
  }

  assert(root_bound + relative_eps(root_bound) >= incumbent.objective || !proven);
  InvestmentSolution out = finish(scenario, std::move(incumbent), budget, options);
  out.node_count = nodes;
  out.proven_optimal = proven;
  out.root_bound = root_bound;
  return out;
}

InvestmentSolution brute_force_investment(const Scenario& scenario, double budget,
                                          std::int64_t enumeration_cap,
                                          const InvestmentOptions& options) {
  require_valid(scenario);
  if (!(budget >= 0.0)) throw ModelError("budget must be >= 0");

  std::vector<std::size_t> purchasable;
  std::int64_t combos = 1;
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    const int max_units = scenario.technologies[k].max_units;
    if (max_units == 0) continue;
    purchasable.push_back(k);
    combos *= static_cast<std::int64_t>(max_units) + 1;
    if (combos > enumeration_cap) {
      throw ModelError(fmt::format("enumeration exceeds cap of {} unit vectors", enumeration_cap));
    }
  }

  std::vector<int> units(scenario.technologies.size(), 0);
  Candidate best;
  bool have_best = false;
  std::int64_t visited = 0;
  for (;;) {
    const bool affordable = options.invest_in_objective ||
                            investment_cost(scenario, units) <= budget + relative_eps(budget);
    if (affordable) {
      ++visited;
      Candidate c = evaluate(scenario, units, options);
      if (!have_best || c.objective > best.objective + relative_eps(best.objective)) {
        best = std::move(c);
        have_best = true;
      }
    }
    // Odometer with the last purchasable technology turning fastest, so the
    // sequence is lexicographic in scenario order.
    std::size_t pos = purchasable.size();
    while (pos > 0) {
      const std::size_t k = purchasable[pos - 1];
      if (units[k] < scenario.technologies[k].max_units) {
        ++units[k];
        break;
      }
      units[k] = 0;
      --pos;
    }
    if (pos == 0) break;
  }

  InvestmentSolution out = finish(scenario, std::move(best), budget, options);
  out.node_count = visited;
  out.root_bound = out.objective;
  return out;
}

}  // namespace pathway
