#include "pathway/management.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "pathway/simplex.hpp"

namespace pathway {

ElementValues ElementValues::zeros(const Scenario& scenario) {
  return {Eigen::VectorXd::Zero(scenario.suppliers.size()),
          Eigen::VectorXd::Zero(scenario.consumers.size()),
          Eigen::VectorXd::Zero(scenario.technologies.size())};
}

double ElementValues::at(const Scenario& scenario, const std::string& id) const {
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    if (scenario.suppliers[i].id == id) return supplier[i];
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    if (scenario.consumers[j].id == id) return consumer[j];
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    if (scenario.technologies[k].id == id) return technology[k];
  }
  throw ModelError(fmt::format("unknown element '{}'", id));
}

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::supplier: return "supplier";
    case ElementKind::consumer: return "consumer";
    case ElementKind::technology: return "technology";
  }
  return "?";
}

LinearProgram<double> build_management_lp(const Scenario& scenario) {
  require_valid(scenario);
  const auto ns = static_cast<Eigen::Index>(scenario.suppliers.size());
  const auto nd = static_cast<Eigen::Index>(scenario.consumers.size());
  const auto nt = static_cast<Eigen::Index>(scenario.technologies.size());
  const auto np = static_cast<Eigen::Index>(scenario.products.size());

  std::map<std::string, Eigen::Index> row_of;
  for (Eigen::Index p = 0; p < np; ++p) row_of[scenario.products[p].id] = p;

  LinearProgram<double> lp(np, ns + nd + nt);
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index p = 0; p < np; ++p) lp.row_labels[p] = scenario.products[p].id;

  for (Eigen::Index i = 0; i < ns; ++i) {
    const auto& s = scenario.suppliers[i];
    entries.emplace_back(row_of.at(s.product), i, 1.0);
    lp.objective[i] = -s.alpha;
    lp.upper[i] = s.capacity;
    lp.var_labels[i] = s.id;
  }
  for (Eigen::Index j = 0; j < nd; ++j) {
    const auto& c = scenario.consumers[j];
    const Eigen::Index col = ns + j;
    entries.emplace_back(row_of.at(c.product), col, -1.0);
    lp.objective[col] = c.alpha;
    lp.upper[col] = c.capacity;
    lp.var_labels[col] = c.id;
  }
  for (Eigen::Index k = 0; k < nt; ++k) {
    const auto& tech = scenario.technologies[k];
    const Eigen::Index col = ns + nd + k;
    for (const auto& [product, factor] : tech.gamma) {
      if (factor != 0.0) entries.emplace_back(row_of.at(product), col, factor);
    }
    lp.objective[col] = -tech.alpha;
    lp.upper[col] = tech.installed_capacity();
    lp.var_labels[col] = tech.id;
  }
  lp.rows.setFromTriplets(entries.begin(), entries.end());
  return lp;
}

ManagementSolution solve_management(const Scenario& scenario, const Tolerances<double>& tol) {
  const auto lp = build_management_lp(scenario);
  const auto sol = solve_lp(lp, tol);

  const auto ns = static_cast<Eigen::Index>(scenario.suppliers.size());
  const auto nd = static_cast<Eigen::Index>(scenario.consumers.size());
  const auto nt = static_cast<Eigen::Index>(scenario.technologies.size());

  ManagementSolution out;
  out.status = sol.status;
  out.supply = sol.x.segment(0, ns);
  out.demand = sol.x.segment(ns, nd);
  out.throughput = sol.x.segment(ns + nd, nt);
  out.price = sol.row_duals;
  out.bound_dual = {sol.bound_duals.segment(0, ns), sol.bound_duals.segment(ns, nd),
                    sol.bound_duals.segment(ns + nd, nt)};
  out.degenerate = sol.degenerate;
  if (!out.optimal()) {
    out.profit = ElementValues::zeros(scenario);
    return out;
  }
  out.surplus = sol.objective_value;

  // Unscaling leaves round-off where the exact answer is zero.
  double bid_scale = 1.0;
  for (const auto& e : scenario.suppliers) bid_scale = std::max(bid_scale, std::abs(e.alpha));
  for (const auto& e : scenario.consumers) bid_scale = std::max(bid_scale, std::abs(e.alpha));
  for (const auto& e : scenario.technologies) bid_scale = std::max(bid_scale, std::abs(e.alpha));
  auto snap = [](Eigen::VectorXd& v, double eps) {
    for (auto& x : v) {
      if (std::abs(x) <= eps) x = 0.0;
    }
  };
  snap(out.price, 1e-12 * bid_scale);
  out.profit = compute_profits(scenario, out.supply, out.demand, out.throughput, out.price);
  const double profit_eps = 1e-12 * (1.0 + std::abs(out.surplus));
  snap(out.profit.supplier, profit_eps);
  snap(out.profit.consumer, profit_eps);
  snap(out.profit.technology, profit_eps);
  return out;
}

namespace {

void check_sizes(const Scenario& scenario, const Eigen::VectorXd& supply,
                 const Eigen::VectorXd& demand, const Eigen::VectorXd& throughput) {
  if (supply.size() != static_cast<Eigen::Index>(scenario.suppliers.size()) ||
      demand.size() != static_cast<Eigen::Index>(scenario.consumers.size()) ||
      throughput.size() != static_cast<Eigen::Index>(scenario.technologies.size())) {
    throw ModelError("allocation sizes do not match the scenario");
  }
}

}  // namespace

double compute_surplus(const Scenario& scenario, const Eigen::VectorXd& supply,
                       const Eigen::VectorXd& demand, const Eigen::VectorXd& throughput) {
  check_sizes(scenario, supply, demand, throughput);
  double value = 0.0;
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    value += scenario.consumers[j].alpha * demand[j];
  }
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    value -= scenario.suppliers[i].alpha * supply[i];
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    value -= scenario.technologies[k].alpha * throughput[k];
  }
  return value;
}

ElementValues compute_profits(const Scenario& scenario, const Eigen::VectorXd& supply,
                              const Eigen::VectorXd& demand, const Eigen::VectorXd& throughput,
                              const Eigen::VectorXd& price) {
  check_sizes(scenario, supply, demand, throughput);
  if (price.size() != static_cast<Eigen::Index>(scenario.products.size())) {
    throw ModelError("price vector size does not match the scenario");
  }
  ElementValues profit = ElementValues::zeros(scenario);
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    const auto& s = scenario.suppliers[i];
    profit.supplier[i] = (price[scenario.product_index(s.product)] - s.alpha) * supply[i];
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    const auto& c = scenario.consumers[j];
    profit.consumer[j] = (c.alpha - price[scenario.product_index(c.product)]) * demand[j];
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    profit.technology[k] =
        (technology_value(scenario, k, price) - scenario.technologies[k].alpha) * throughput[k];
  }
  return profit;
}

double technology_value(const Technology& technology,
                        const std::map<std::string, double>& prices) {
  double value = 0.0;
  for (const auto& [product, factor] : technology.gamma) {
    if (factor == 0.0) continue;
    auto it = prices.find(product);
    if (it == prices.end()) {
      throw ModelError(fmt::format("no price for product '{}' of technology '{}'", product,
                                   technology.id));
    }
    value += factor * it->second;
  }
  return value;
}

double technology_value(const Scenario& scenario, std::size_t technology,
                        const Eigen::VectorXd& price) {
  double value = 0.0;
  for (const auto& [product, factor] : scenario.technologies.at(technology).gamma) {
    value += factor * price[scenario.product_index(product)];
  }
  return value;
}

double waste_flow(const Scenario& scenario, const ManagementSolution& solution) {
  double total = 0.0;
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    if (scenario.product(scenario.consumers[j].product).is_waste) total += solution.demand[j];
  }
  return total;
}

double utility_cost(const Scenario& scenario, const ManagementSolution& solution) {
  double cost = 0.0;
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    cost += scenario.technologies[k].alpha * solution.throughput[k];
  }
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    cost += scenario.suppliers[i].alpha * solution.supply[i];
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    const auto& c = scenario.consumers[j];
    if (scenario.product(c.product).is_waste) cost -= c.alpha * solution.demand[j];
  }
  return cost;
}

bool ActivePathway::contains(const std::string& id) const {
  return std::find(elements.begin(), elements.end(), id) != elements.end();
}

ActivePathway active_pathways(const Scenario& scenario, const ManagementSolution& solution,
                              double activity_tol) {
  ActivePathway out;
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    const auto& s = scenario.suppliers[i];
    if (solution.supply[i] <= activity_tol) continue;
    out.elements.push_back(s.id);
    out.edges.push_back({s.id, s.product, solution.supply[i]});
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    const auto& tech = scenario.technologies[k];
    if (solution.throughput[k] <= activity_tol) continue;
    out.elements.push_back(tech.id);
    for (const auto& [product, factor] : tech.gamma) {
      if (factor != 0.0) out.edges.push_back({tech.id, product, factor * solution.throughput[k]});
    }
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    const auto& c = scenario.consumers[j];
    if (solution.demand[j] <= activity_tol) continue;
    out.elements.push_back(c.id);
    out.edges.push_back({c.id, c.product, solution.demand[j]});
  }
  return out;
}

double default_activity_tol(const Scenario& scenario) {
  double largest = 0.0;
  for (const auto& tech : scenario.technologies) {
    largest = std::max(largest, tech.potential_capacity());
  }
  return largest > 0.0 ? 1e-6 * largest : 1e-9;
}

std::vector<std::string> active_technologies(const Scenario& scenario,
                                             const ManagementSolution& solution,
                                             double activity_tol) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    if (solution.throughput[k] > activity_tol) ids.push_back(scenario.technologies[k].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace pathway
