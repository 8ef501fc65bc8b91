#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pathway {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

/// maximize c·x  s.t.  A x = b,  lower <= x <= upper.
///
/// Row duals follow the Lagrangian c·x + yᵀ(A x − b), so at an optimum
///   c + Aᵀy − λ + μ = 0,   λ, μ >= 0,
/// with λ the upper-bound and μ the lower-bound multipliers. For a balance row
/// written supply − demand = 0 this makes y the (positive) product price.
template <typename Scalar>
struct LinearProgram {
  Vector<Scalar> objective;
  SparseMatrix<Scalar> rows;
  Vector<Scalar> rhs;
  Vector<Scalar> lower;
  Vector<Scalar> upper;
  std::vector<std::string> var_labels;
  std::vector<std::string> row_labels;

  LinearProgram() = default;
  LinearProgram(Eigen::Index num_rows, Eigen::Index num_vars)
      : objective(Vector<Scalar>::Zero(num_vars)),
        rows(num_rows, num_vars),
        rhs(Vector<Scalar>::Zero(num_rows)),
        lower(Vector<Scalar>::Zero(num_vars)),
        upper(Vector<Scalar>::Constant(num_vars, std::numeric_limits<Scalar>::infinity())),
        var_labels(num_vars),
        row_labels(num_rows) {}

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return rhs.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector<Scalar> x;
  Scalar objective_value = 0;
  Vector<Scalar> row_duals;
  Vector<Scalar> bound_duals;    // λ, one per variable
  Vector<Scalar> reduced_costs;  // c + Aᵀy = λ − μ
  bool degenerate = false;       // a basic variable sits on a bound; y may not be unique
  int iterations = 0;

  /// μ recovered from the reduced costs.
  Vector<Scalar> lower_duals() const { return bound_duals - reduced_costs; }
};

template <typename Scalar>
struct Tolerances {
  Scalar feasibility = Scalar(1e-9);
  Scalar dual = Scalar(1e-7);
  Scalar complementarity = Scalar(1e-7);
  Scalar pivot = Scalar(1e-10);
  int degenerate_pivots_before_bland = 50;
  int refactor_interval = 64;
};

}  // namespace pathway
