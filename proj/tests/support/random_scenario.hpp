#pragma once

// Random product–technology graphs for property tests.

#include <algorithm>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "pathway/management.hpp"
#include "pathway/model.hpp"

namespace pathway::testing {

struct RandomScenarioOptions {
  int max_products = 8;
  int max_elements = 12;
  int max_purchasable_units = 0;  // total over technologies; 0 keeps everything installed
  bool with_waste = true;
};

inline Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioOptions& opt = {}) {
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  // Round to a 1/8 grid so degenerate ties show up now and then.
  auto coarse = [&](double lo, double hi) { return std::round(uniform(lo, hi) * 8.0) / 8.0; };

  Scenario s;
  const int np = pick(1, opt.max_products);
  for (int p = 0; p < np; ++p) {
    s.products.push_back({"p" + std::to_string(p), "u", false});
  }
  if (opt.with_waste && np > 1 && pick(0, 1) == 1) s.products.back().is_waste = true;
  auto product_id = [&](int p) { return s.products[p].id; };

  const int ne = pick(1, opt.max_elements);
  int units_left = opt.max_purchasable_units;
  for (int e = 0; e < ne; ++e) {
    const int kind = pick(0, 2);
    const std::string id = "e" + std::to_string(e);
    if (kind == 0) {
      s.suppliers.push_back({id, product_id(pick(0, np - 1)), coarse(-1.0, 4.0), coarse(0.0, 10.0)});
    } else if (kind == 1) {
      const int p = pick(0, np - 1);
      const double bid = s.products[p].is_waste ? coarse(-3.0, 0.0) : coarse(-1.0, 6.0);
      s.consumers.push_back({id, product_id(p), bid, coarse(0.0, 10.0)});
    } else {
      Technology t;
      t.id = id;
      const int ref = pick(0, np - 1);
      t.ref_product = product_id(ref);
      t.gamma[t.ref_product] = pick(0, 3) == 0 ? -coarse(0.25, 2.0) : -1.0;
      if (t.gamma[t.ref_product] == 0.0) t.gamma[t.ref_product] = -1.0;
      const int outputs = pick(0, std::min(2, np - 1));
      for (int o = 0; o < outputs; ++o) {
        const int p = pick(0, np - 1);
        if (p == ref) continue;
        t.gamma[product_id(p)] = pick(0, 4) == 0 ? -coarse(0.125, 1.5) : coarse(0.125, 3.0);
      }
      t.alpha = coarse(-0.5, 3.0);
      t.capacity_per_unit = coarse(0.5, 6.0);
      t.existing_units = pick(0, 2);
      if (units_left > 0) {
        t.max_units = std::min(units_left, pick(0, 3));
        units_left -= t.max_units;
        t.invest_cost = coarse(0.0, 10.0);
      }
      s.technologies.push_back(std::move(t));
    }
  }
  return s;
}

/// Random allocation satisfying every product balance. Flows may be negative;
/// the balance identity is algebraic and does not need bounds.
struct Allocation {
  Eigen::VectorXd supply, demand, throughput;
};

inline Allocation random_balanced_allocation(const Scenario& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> flow(0.0, 10.0);
  Allocation a{Eigen::VectorXd(s.suppliers.size()), Eigen::VectorXd(s.consumers.size()),
               Eigen::VectorXd(s.technologies.size())};
  for (auto& v : a.supply) v = flow(rng);
  for (auto& v : a.throughput) v = flow(rng);
  for (auto& v : a.demand) v = flow(rng);

  // One absorbing element per product takes the residual.
  for (std::size_t p = 0; p < s.products.size(); ++p) {
    const std::string& id = s.products[p].id;
    double net = 0.0;
    int last_consumer = -1, last_supplier = -1;
    for (std::size_t i = 0; i < s.suppliers.size(); ++i) {
      if (s.suppliers[i].product == id) {
        net += a.supply[i];
        last_supplier = static_cast<int>(i);
      }
    }
    for (std::size_t j = 0; j < s.consumers.size(); ++j) {
      if (s.consumers[j].product == id) {
        net -= a.demand[j];
        last_consumer = static_cast<int>(j);
      }
    }
    for (std::size_t k = 0; k < s.technologies.size(); ++k) {
      auto it = s.technologies[k].gamma.find(id);
      if (it != s.technologies[k].gamma.end()) net += it->second * a.throughput[k];
    }
    if (last_consumer >= 0) {
      a.demand[last_consumer] += net;
    } else if (last_supplier >= 0) {
      a.supply[last_supplier] -= net;
    } else {
      // Only technologies touch p: shut them all down. Earlier products may
      // then be unbalanced, so the caller re-checks.
      for (std::size_t k = 0; k < s.technologies.size(); ++k) {
        if (s.technologies[k].gamma.count(id)) a.throughput[k] = 0.0;
      }
    }
  }
  return a;
}

/// Max |Σ flows| over products, computed from the raw scenario data.
inline double balance_residual(const Scenario& s, const Allocation& a) {
  double worst = 0.0;
  for (const auto& product : s.products) {
    double net = 0.0;
    for (std::size_t i = 0; i < s.suppliers.size(); ++i) {
      if (s.suppliers[i].product == product.id) net += a.supply[i];
    }
    for (std::size_t j = 0; j < s.consumers.size(); ++j) {
      if (s.consumers[j].product == product.id) net -= a.demand[j];
    }
    for (std::size_t k = 0; k < s.technologies.size(); ++k) {
      auto it = s.technologies[k].gamma.find(product.id);
      if (it != s.technologies[k].gamma.end()) net += it->second * a.throughput[k];
    }
    worst = std::max(worst, std::abs(net));
  }
  return worst;
}

/// Complementary-slackness price facts at an optimum, checked directly from
/// scenario bids and bounds. Returns the number of violated implications.
inline int price_fact_violations(const Scenario& s, const ManagementSolution& sol, double tol,
                                 std::string* first = nullptr) {
  int violations = 0;
  auto fail = [&](const std::string& what) {
    if (violations++ == 0 && first) *first = what;
  };
  auto price_of = [&](const std::string& product) {
    for (std::size_t p = 0; p < s.products.size(); ++p) {
      if (s.products[p].id == product) return sol.price[p];
    }
    return 0.0;
  };
  for (std::size_t i = 0; i < s.suppliers.size(); ++i) {
    const auto& e = s.suppliers[i];
    const double pi = price_of(e.product), x = sol.supply[i];
    if (x > tol && pi < e.alpha - tol) fail(e.id + " active below bid");
    if (x < e.capacity - tol && pi > e.alpha + tol) fail(e.id + " unsaturated above bid");
  }
  for (std::size_t j = 0; j < s.consumers.size(); ++j) {
    const auto& e = s.consumers[j];
    const double pi = price_of(e.product), x = sol.demand[j];
    if (x > tol && pi > e.alpha + tol) fail(e.id + " served above bid");
    if (x < e.capacity - tol && pi < e.alpha - tol) fail(e.id + " unsaturated below bid");
  }
  for (std::size_t k = 0; k < s.technologies.size(); ++k) {
    const auto& t = s.technologies[k];
    double value = 0.0;
    for (const auto& [product, factor] : t.gamma) value += factor * price_of(product);
    const double x = sol.throughput[k];
    const double cap = t.capacity_per_unit * t.existing_units;
    if (x > tol && value < t.alpha - tol) fail(t.id + " running below cost");
    if (x < cap - tol && value > t.alpha + tol) fail(t.id + " idle above cost");
  }
  return violations;
}

}  // namespace pathway::testing
