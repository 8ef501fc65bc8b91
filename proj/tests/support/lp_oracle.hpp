#pragma once

// Brute-force LP oracle: every vertex of {A x = b, l <= x <= u} has each
// variable either on a bound or "free", with the free columns solving the
// remaining system. Enumerating all bound/free patterns and keeping feasible
// points finds the optimum of a small bounded LP without any pivoting.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pathway/lp.hpp"

namespace pathway::testing {

struct EnumerationResult {
  double objective;
  Eigen::VectorXd x;
};

inline std::optional<EnumerationResult> enumerate_lp(const LinearProgram<double>& lp,
                                                     double tol = 1e-9) {
  const int n = static_cast<int>(lp.num_vars());
  const int m = static_cast<int>(lp.num_rows());
  const Eigen::MatrixXd a = Eigen::MatrixXd(lp.rows);

  std::optional<EnumerationResult> best;
  std::vector<int> pattern(n, 0);  // 0 lower, 1 upper, 2 free
  long combos = 1;
  for (int j = 0; j < n; ++j) combos *= 3;

  for (long code = 0; code < combos; ++code) {
    long c = code;
    int free_count = 0;
    for (int j = 0; j < n; ++j) {
      pattern[j] = static_cast<int>(c % 3);
      c /= 3;
      if (pattern[j] == 2) ++free_count;
    }
    if (free_count > m) continue;

    Eigen::VectorXd x(n);
    std::vector<int> free_cols;
    for (int j = 0; j < n; ++j) {
      if (pattern[j] == 0) x[j] = lp.lower[j];
      else if (pattern[j] == 1) x[j] = lp.upper[j];
      else free_cols.push_back(j);
    }
    Eigen::VectorXd rhs = lp.rhs;
    for (int j = 0; j < n; ++j) {
      if (pattern[j] != 2) rhs -= a.col(j) * x[j];
    }
    if (!free_cols.empty()) {
      Eigen::MatrixXd sub(m, free_cols.size());
      for (std::size_t f = 0; f < free_cols.size(); ++f) sub.col(f) = a.col(free_cols[f]);
      Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(rhs);
      for (std::size_t f = 0; f < free_cols.size(); ++f) x[free_cols[f]] = z[f];
    }

    if (m > 0 && (a * x - lp.rhs).cwiseAbs().maxCoeff() > tol * (1 + lp.rhs.cwiseAbs().maxCoeff())) {
      continue;
    }
    bool in_bounds = true;
    for (int j = 0; j < n && in_bounds; ++j) {
      in_bounds = x[j] >= lp.lower[j] - tol && x[j] <= lp.upper[j] + tol;
    }
    if (!in_bounds) continue;

    const double value = lp.objective.dot(x);
    if (!best || value > best->objective) best = EnumerationResult{value, x};
  }
  return best;
}

}  // namespace pathway::testing
