#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathway/lp.hpp"
#include "pathway/model.hpp"

namespace pathway {

/// One value per supplier, consumer and technology, in scenario order.
struct ElementValues {
  Eigen::VectorXd supplier;
  Eigen::VectorXd consumer;
  Eigen::VectorXd technology;

  static ElementValues zeros(const Scenario& scenario);

  double total() const { return supplier.sum() + consumer.sum() + technology.sum(); }

  /// Value for an element id; throws ModelError for an unknown id.
  double at(const Scenario& scenario, const std::string& id) const;
};

struct ManagementSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd supply;      // s, per supplier
  Eigen::VectorXd demand;      // d, per consumer
  Eigen::VectorXd throughput;  // t, per technology, reference-product units
  Eigen::VectorXd price;       // π, per product
  ElementValues bound_dual;    // λ
  ElementValues profit;        // φ
  double surplus = 0.0;
  bool degenerate = false;     // prices come from a degenerate basis and need not be unique

  bool optimal() const { return status == LpStatus::optimal; }
};

/// Columns: suppliers, consumers, technologies (scenario order). One balance
/// row per product with rhs 0. Technology upper bounds are installed capacity.
LinearProgram<double> build_management_lp(const Scenario& scenario);

ManagementSolution solve_management(const Scenario& scenario,
                                    const Tolerances<double>& tol = Tolerances<double>{});

/// Σ α_j d_j − Σ α_i s_i − Σ α_k t_k, for any allocation.
double compute_surplus(const Scenario& scenario, const Eigen::VectorXd& supply,
                       const Eigen::VectorXd& demand, const Eigen::VectorXd& throughput);

/// φ_i = (π_i − α_i) s_i,  φ_j = (α_j − π_j) d_j,  φ_k = (π_k − α_k) t_k.
ElementValues compute_profits(const Scenario& scenario, const Eigen::VectorXd& supply,
                              const Eigen::VectorXd& demand, const Eigen::VectorXd& throughput,
                              const Eigen::VectorXd& price);

/// π_k = Σ_p γ_kp π_p. Throws ModelError when a participating product has no price.
double technology_value(const Technology& technology,
                        const std::map<std::string, double>& prices);
double technology_value(const Scenario& scenario, std::size_t technology,
                        const Eigen::VectorXd& price);

/// Operating plus supply cost plus disposal paid to consumers of waste products.
double utility_cost(const Scenario& scenario, const ManagementSolution& solution);

/// Total flow taken by consumers of waste products.
double waste_flow(const Scenario& scenario, const ManagementSolution& solution);

enum class ElementKind { supplier, consumer, technology };

const char* to_string(ElementKind kind);

struct PathwayEdge {
  std::string element;
  std::string product;
  double flow = 0.0;  // signed for technologies: γ_kp t_k
};

struct ActivePathway {
  std::vector<std::string> elements;
  std::vector<PathwayEdge> edges;

  bool contains(const std::string& id) const;
};

/// Elements whose allocation exceeds activity_tol, with their product flows.
ActivePathway active_pathways(const Scenario& scenario, const ManagementSolution& solution,
                              double activity_tol);

/// 1e-6 of the largest technology capacity the scenario can ever install.
double default_activity_tol(const Scenario& scenario);

/// Sorted ids of technologies with throughput above activity_tol.
std::vector<std::string> active_technologies(const Scenario& scenario,
                                             const ManagementSolution& solution,
                                             double activity_tol);

}  // namespace pathway
