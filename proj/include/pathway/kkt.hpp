#pragma once

// Independent optimality certificate for LpSolution. Nothing here touches the
// simplex internals; it only evaluates residuals of the reported vectors.
//
// Violations are reported raw; pass/fail compares each one against its
// tolerance times (1 + magnitude of the terms that produced it).

#include <algorithm>
#include <cmath>

#include "pathway/lp.hpp"

namespace pathway {

struct KktCheck {
  bool pass = true;
  double max_violation = 0.0;

  void record(double violation, double allowed) {
    max_violation = std::max(max_violation, violation);
    if (violation > allowed) pass = false;
  }
};

struct KktReport {
  KktCheck primal_feasibility;
  KktCheck dual_feasibility;
  KktCheck stationarity;
  KktCheck complementary_slackness;

  bool all_pass() const {
    return primal_feasibility.pass && dual_feasibility.pass && stationarity.pass &&
           complementary_slackness.pass;
  }
};

template <typename Scalar>
KktReport verify_kkt(const LinearProgram<Scalar>& lp, const LpSolution<Scalar>& sol,
                     const Tolerances<Scalar>& tol = Tolerances<Scalar>{}) {
  using std::abs;
  KktReport report;
  const auto n = lp.num_vars();
  const auto m = lp.num_rows();
  if (sol.x.size() != n || sol.row_duals.size() != m || sol.bound_duals.size() != n ||
      sol.reduced_costs.size() != n) {
    report.primal_feasibility.pass = false;
    report.stationarity.pass = false;
    return report;
  }

  // A x = b, measured against the magnitude of the row activity.
  Vector<Scalar> activity = Vector<Scalar>::Zero(m);
  Vector<Scalar> magnitude = Vector<Scalar>::Zero(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (typename SparseMatrix<Scalar>::InnerIterator it(lp.rows, j); it; ++it) {
      activity[it.row()] += it.value() * sol.x[j];
      magnitude[it.row()] += abs(it.value() * sol.x[j]);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Scalar violation = abs(activity[i] - lp.rhs[i]);
    report.primal_feasibility.record(
        double(violation), double(tol.feasibility * (1 + magnitude[i] + abs(lp.rhs[i]))));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar below = lp.lower[j] - sol.x[j];
    const Scalar above = sol.x[j] - lp.upper[j];
    if (below > 0) {
      report.primal_feasibility.record(double(below),
                                       double(tol.feasibility * (1 + abs(lp.lower[j]))));
    }
    if (above > 0) {
      report.primal_feasibility.record(double(above),
                                       double(tol.feasibility * (1 + abs(lp.upper[j]))));
    }
  }

  // c + Aᵀy − λ + μ = 0 with μ = λ − reduced_cost, i.e. c + Aᵀy = reduced_cost.
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar gradient = lp.objective[j];
    Scalar scale = abs(lp.objective[j]);
    for (typename SparseMatrix<Scalar>::InnerIterator it(lp.rows, j); it; ++it) {
      gradient += it.value() * sol.row_duals[it.row()];
      scale += abs(it.value() * sol.row_duals[it.row()]);
    }
    report.stationarity.record(double(abs(gradient - sol.reduced_costs[j])),
                               double(tol.dual * (1 + scale)));

    const Scalar lambda = sol.bound_duals[j];
    const Scalar mu = lambda - sol.reduced_costs[j];
    const Scalar dual_scale = tol.dual * (1 + scale);
    report.dual_feasibility.record(double(std::max(Scalar(0), -lambda)), double(dual_scale));
    report.dual_feasibility.record(double(std::max(Scalar(0), -mu)), double(dual_scale));

    if (std::isfinite(lp.upper[j])) {
      const Scalar gap = std::max(Scalar(0), lp.upper[j] - sol.x[j]);
      report.complementary_slackness.record(
          double(abs(lambda) * gap),
          double(tol.complementarity * (1 + abs(lambda) * std::max(Scalar(1), abs(lp.upper[j])))));
    } else {
      report.complementary_slackness.record(double(abs(lambda)), double(dual_scale));
    }
    const Scalar gap = std::max(Scalar(0), sol.x[j] - lp.lower[j]);
    report.complementary_slackness.record(
        double(abs(mu) * gap),
        double(tol.complementarity * (1 + abs(mu) * std::max(Scalar(1), abs(lp.lower[j])))));
  }
  return report;
}

/// Dual objective −b·y + upper·λ − lower·μ; equals c·x at an optimum.
template <typename Scalar>
Scalar dual_objective(const LinearProgram<Scalar>& lp, const LpSolution<Scalar>& sol) {
  const Vector<Scalar> mu = sol.lower_duals();
  Scalar value = -lp.rhs.dot(sol.row_duals) - lp.lower.dot(mu);
  for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
    if (sol.bound_duals[j] != Scalar(0)) value += lp.upper[j] * sol.bound_duals[j];
  }
  return value;
}

}  // namespace pathway
