#include "pathway/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <fmt/core.h>

namespace pathway {

std::size_t Scenario::product_index(const std::string& id) const {
  for (std::size_t p = 0; p < products.size(); ++p) {
    if (products[p].id == id) return p;
  }
  throw ModelError(fmt::format("unknown product '{}'", id));
}

const Product& Scenario::product(const std::string& id) const {
  return products[product_index(id)];
}

const Technology& Scenario::technology(const std::string& id) const {
  auto it = std::find_if(technologies.begin(), technologies.end(),
                         [&](const Technology& k) { return k.id == id; });
  if (it == technologies.end()) throw ModelError(fmt::format("unknown technology '{}'", id));
  return *it;
}

std::size_t ValidationReport::error_count() const {
  return std::count_if(issues.begin(), issues.end(),
                       [](const ValidationIssue& i) { return i.severity == Severity::error; });
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

std::vector<ValidationIssue> ValidationReport::errors() const {
  std::vector<ValidationIssue> out;
  std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
               [](const ValidationIssue& i) { return i.severity == Severity::error; });
  return out;
}

std::vector<ValidationIssue> ValidationReport::warnings() const {
  std::vector<ValidationIssue> out;
  std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
               [](const ValidationIssue& i) { return i.severity == Severity::warning; });
  return out;
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void error(const std::string& where, std::string message) {
    report_.issues.push_back({Severity::error, where, std::move(message)});
  }
  void warning(const std::string& where, std::string message) {
    report_.issues.push_back({Severity::warning, where, std::move(message)});
  }

  void finite(const std::string& where, const char* field, double value) {
    if (!std::isfinite(value)) error(where, fmt::format("{} must be finite", field));
  }

  void capacity(const std::string& where, const char* field, double value) {
    if (!std::isfinite(value) || value < 0.0) {
      error(where, fmt::format("{} must be finite and >= 0", field));
    }
  }

 private:
  ValidationReport& report_;
};

}  // namespace

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  Checker check(report);

  std::set<std::string> product_ids;
  for (const auto& p : scenario.products) {
    if (p.id.empty()) check.error("", "product id must be non-empty");
    if (!product_ids.insert(p.id).second) {
      check.error(p.id, fmt::format("duplicate product id '{}'", p.id));
    }
    if (p.unit.empty()) check.error(p.id, "product unit must be non-empty");
  }

  // Suppliers, consumers and technologies share one id space so per-element
  // results can be keyed by id.
  std::set<std::string> element_ids;
  auto claim = [&](const std::string& kind, const std::string& id) {
    if (id.empty()) check.error("", fmt::format("{} id must be non-empty", kind));
    if (!element_ids.insert(id).second) {
      check.error(id, fmt::format("duplicate element id '{}'", id));
    }
  };
  auto known = [&](const std::string& where, const std::string& product) {
    if (!product_ids.count(product)) {
      check.error(where, fmt::format("unknown product '{}'", product));
    }
  };

  for (const auto& s : scenario.suppliers) {
    claim("supplier", s.id);
    known(s.id, s.product);
    check.finite(s.id, "alpha", s.alpha);
    check.capacity(s.id, "capacity", s.capacity);
  }
  for (const auto& c : scenario.consumers) {
    claim("consumer", c.id);
    known(c.id, c.product);
    check.finite(c.id, "alpha", c.alpha);
    check.capacity(c.id, "capacity", c.capacity);
  }
  for (const auto& k : scenario.technologies) {
    claim("technology", k.id);
    check.finite(k.id, "alpha", k.alpha);
    check.capacity(k.id, "capacity_per_unit", k.capacity_per_unit);
    if (!std::isfinite(k.invest_cost) || k.invest_cost < 0.0) {
      check.error(k.id, "invest_cost must be finite and >= 0");
    }
    if (k.max_units < 0) check.error(k.id, "max_units must be >= 0");
    if (k.existing_units < 0) check.error(k.id, "existing_units must be >= 0");
    for (const auto& [product, factor] : k.gamma) {
      known(k.id, product);
      check.finite(k.id, "gamma", factor);
    }
    auto ref = k.gamma.find(k.ref_product);
    if (ref == k.gamma.end()) {
      check.error(k.id, fmt::format("reference product '{}' missing from gamma", k.ref_product));
    } else if (!(ref->second < 0.0)) {
      check.error(k.id, "reference product must be consumed (γ < 0)");
    } else if (ref->second != -1.0) {
      check.warning(k.id, "reference factor is not -1; throughput is not in reference units");
    }
  }

  // A consumed product nobody can produce only ever clears at zero.
  for (const auto& p : scenario.products) {
    bool consumed = std::any_of(scenario.consumers.begin(), scenario.consumers.end(),
                                [&](const Consumer& c) { return c.product == p.id; });
    if (!consumed) continue;
    bool supplied = std::any_of(scenario.suppliers.begin(), scenario.suppliers.end(),
                                [&](const Supplier& s) { return s.product == p.id; });
    bool produced = std::any_of(
        scenario.technologies.begin(), scenario.technologies.end(), [&](const Technology& k) {
          auto it = k.gamma.find(p.id);
          return it != k.gamma.end() && it->second > 0.0;
        });
    if (!supplied && !produced) {
      check.warning(p.id, "product has a consumer but no supplier or producing technology");
    }
  }
  return report;
}

void require_valid(const Scenario& scenario) {
  auto report = validate_scenario(scenario);
  if (report.ok()) return;
  std::string message = "invalid scenario:";
  for (const auto& issue : report.errors()) {
    message += fmt::format("\n  {}: {}", issue.where.empty() ? "<scenario>" : issue.where,
                           issue.message);
  }
  throw ModelError(message);
}

IndexSets index_sets(const Scenario& scenario) {
  IndexSets sets;
  for (const auto& p : scenario.products) sets[p.id];
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    sets[scenario.suppliers[i].product].suppliers.push_back(i);
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    sets[scenario.consumers[j].product].consumers.push_back(j);
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    for (const auto& [product, factor] : scenario.technologies[k].gamma) {
      if (factor != 0.0) sets[product].technologies.push_back(k);
    }
  }
  return sets;
}

Scenario with_all_units_built(Scenario scenario) {
  for (auto& k : scenario.technologies) {
    k.existing_units += k.max_units;
    k.max_units = 0;
  }
  return scenario;
}

}  // namespace pathway
