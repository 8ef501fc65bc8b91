#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathway {

/// Thrown for contract violations on scenario data (unknown ids, unvalidated
/// scenarios handed to a solver, malformed grids, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Product {
  std::string id;
  std::string unit;
  bool is_waste = false;

  bool operator==(const Product&) const = default;
};

struct Supplier {
  std::string id;
  std::string product;
  double alpha = 0.0;     // offered value per product unit
  double capacity = 0.0;  // product units per time basis

  bool operator==(const Supplier&) const = default;
};

struct Consumer {
  std::string id;
  std::string product;
  double alpha = 0.0;
  double capacity = 0.0;

  bool operator==(const Consumer&) const = default;
};

/// A technology processes its reference product; every flow it touches is
/// gamma[p] * throughput. The reference product must carry a negative factor.
struct Technology {
  std::string id;
  double alpha = 0.0;  // operating bid per reference-product unit
  std::string ref_product;
  double capacity_per_unit = 0.0;
  std::map<std::string, double> gamma;
  double invest_cost = 0.0;  // per purchased unit
  int max_units = 0;         // purchasable
  int existing_units = 0;    // installed, consume no budget

  double installed_capacity() const { return capacity_per_unit * existing_units; }
  double potential_capacity() const {
    return capacity_per_unit * (existing_units + max_units);
  }

  bool operator==(const Technology&) const = default;
};

struct ScenarioMetadata {
  std::string title;
  std::string currency;
  std::string notes;

  bool operator==(const ScenarioMetadata&) const = default;
};

struct Scenario {
  std::vector<Product> products;
  std::vector<Supplier> suppliers;
  std::vector<Consumer> consumers;
  std::vector<Technology> technologies;
  std::string time_basis = "annual";
  ScenarioMetadata metadata;

  std::size_t num_elements() const {
    return suppliers.size() + consumers.size() + technologies.size();
  }

  // Linear lookups; scenarios are desk-scale.
  std::size_t product_index(const std::string& id) const;
  const Product& product(const std::string& id) const;
  const Technology& technology(const std::string& id) const;

  bool operator==(const Scenario&) const = default;
};

enum class Severity { warning, error };

struct ValidationIssue {
  Severity severity;
  std::string where;  // element or product id, "" for scenario-wide
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;
  std::vector<ValidationIssue> errors() const;
  std::vector<ValidationIssue> warnings() const;
};

ValidationReport validate_scenario(const Scenario& scenario);

/// Throws ModelError listing every error of validate_scenario.
void require_valid(const Scenario& scenario);

/// Elements touching one product, as indices into the scenario's lists.
struct ProductIncidence {
  std::vector<std::size_t> suppliers;
  std::vector<std::size_t> consumers;
  std::vector<std::size_t> technologies;

  bool operator==(const ProductIncidence&) const = default;
};

using IndexSets = std::map<std::string, ProductIncidence>;

/// Technology k is listed under p iff gamma[k][p] != 0. Every product of the
/// scenario has an entry, possibly empty.
IndexSets index_sets(const Scenario& scenario);

/// Copy of the scenario where every purchasable unit counts as installed
/// (existing_units += max_units, max_units = 0).
Scenario with_all_units_built(Scenario scenario);

}  // namespace pathway
