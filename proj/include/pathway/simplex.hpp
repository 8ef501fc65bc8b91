#pragma once

// Bounded-variable primal simplex with a dense explicit basis inverse.
//
// Phase 1 starts every structural variable on its lower bound and covers the
// residual with one signed artificial per row; phase 2 optimizes with the
// artificials fixed at zero. Dantzig pricing is used until a run of
// degenerate pivots, after which Bland's rule takes over until the objective
// moves again. Rows and columns are equilibrated internally.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "pathway/lp.hpp"

namespace pathway {

namespace detail {

template <typename Scalar>
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram<Scalar>& lp, const Tolerances<Scalar>& tol)
      : lp_(lp), tol_(tol) {}

  LpSolution<Scalar> run() {
    check_input();
    const auto n = lp_.num_vars();
    LpSolution<Scalar> out;
    out.x = Vector<Scalar>::Zero(n);
    out.row_duals = Vector<Scalar>::Zero(lp_.num_rows());
    out.bound_duals = Vector<Scalar>::Zero(n);
    out.reduced_costs = Vector<Scalar>::Zero(n);

    if (!compress_rows()) {
      out.status = LpStatus::infeasible;
      return out;
    }
    initialize();

    Vector<Scalar> phase1 = Vector<Scalar>::Zero(total_);
    phase1.tail(m_).setConstant(Scalar(-1));
    optimize(phase1);

    if (max_artificial() > feasibility_scale() * tol_.feasibility) {
      out.status = LpStatus::infeasible;
      out.x = x_.head(n_).cwiseProduct(col_scale_);
      out.iterations = iterations_;
      return out;
    }
    retire_artificials();

    Vector<Scalar> phase2 = Vector<Scalar>::Zero(total_);
    phase2.head(n_) = cost_;
    if (!optimize(phase2)) {
      out.status = LpStatus::unbounded;
      out.x = x_.head(n_).cwiseProduct(col_scale_);
      out.iterations = iterations_;
      return out;
    }
    finalize(phase2, out);
    return out;
  }

 private:
  enum class State : unsigned char { basic, at_lower, at_upper };

  static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  void check_input() const {
    const auto n = lp_.num_vars();
    if (lp_.rows.cols() != n || lp_.lower.size() != n || lp_.upper.size() != n ||
        lp_.rows.rows() != lp_.num_rows()) {
      throw std::invalid_argument("solve_lp: inconsistent problem dimensions");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(lp_.lower[j])) {
        throw std::invalid_argument("solve_lp: lower bounds must be finite");
      }
      if (lp_.lower[j] > lp_.upper[j]) {
        throw std::invalid_argument("solve_lp: lower bound exceeds upper bound");
      }
    }
  }

  // Drops empty rows; an empty row with nonzero rhs makes the problem infeasible.
  bool compress_rows() {
    n_ = static_cast<int>(lp_.num_vars());
    std::vector<int> nnz(lp_.num_rows(), 0);
    for (int j = 0; j < n_; ++j) {
      for (typename SparseMatrix<Scalar>::InnerIterator it(lp_.rows, j); it; ++it) {
        if (it.value() != Scalar(0)) ++nnz[it.row()];
      }
    }
    std::vector<int> position(lp_.num_rows(), -1);
    for (Eigen::Index i = 0; i < lp_.num_rows(); ++i) {
      if (nnz[i] > 0) {
        position[i] = static_cast<int>(kept_rows_.size());
        kept_rows_.push_back(static_cast<int>(i));
      } else if (std::abs(lp_.rhs[i]) > tol_.feasibility * (1 + std::abs(lp_.rhs[i]))) {
        return false;
      }
    }
    m_ = static_cast<int>(kept_rows_.size());
    total_ = n_ + m_;

    std::vector<Eigen::Triplet<Scalar>> triplets;
    for (int j = 0; j < n_; ++j) {
      for (typename SparseMatrix<Scalar>::InnerIterator it(lp_.rows, j); it; ++it) {
        if (it.value() != Scalar(0)) triplets.emplace_back(position[it.row()], j, it.value());
      }
    }
    a_.resize(m_, n_);
    a_.setFromTriplets(triplets.begin(), triplets.end());
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_[i] = lp_.rhs[kept_rows_[i]];
    scale();
    return true;
  }

  // Geometric-mean equilibration with power-of-two factors, so scaling and
  // unscaling are exact. Columns are x = col_scale * x', rows r_i A x = r_i b.
  void scale() {
    row_scale_ = Vector<Scalar>::Ones(m_);
    col_scale_ = Vector<Scalar>::Ones(n_);
    auto pow2 = [](Scalar v) { return std::exp2(std::round(std::log2(v))); };
    for (int pass = 0; pass < 6; ++pass) {
      Vector<Scalar> row_max = Vector<Scalar>::Zero(m_);
      Vector<Scalar> row_min = Vector<Scalar>::Constant(m_, kInf);
      for (int j = 0; j < n_; ++j) {
        for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
          const Scalar v = std::abs(it.value()) * row_scale_[it.row()] * col_scale_[j];
          row_max[it.row()] = std::max(row_max[it.row()], v);
          row_min[it.row()] = std::min(row_min[it.row()], v);
        }
      }
      for (int i = 0; i < m_; ++i) row_scale_[i] *= pow2(1 / std::sqrt(row_max[i] * row_min[i]));
      for (int j = 0; j < n_; ++j) {
        Scalar hi = 0, lo = kInf;
        for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
          const Scalar v = std::abs(it.value()) * row_scale_[it.row()] * col_scale_[j];
          hi = std::max(hi, v);
          lo = std::min(lo, v);
        }
        if (hi > 0) col_scale_[j] *= pow2(1 / std::sqrt(hi * lo));
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
        it.valueRef() *= row_scale_[it.row()] * col_scale_[j];
      }
    }
    b_ = b_.cwiseProduct(row_scale_);
    cost_ = lp_.objective.cwiseProduct(col_scale_);
  }

  void initialize() {
    lo_.resize(total_);
    up_.resize(total_);
    x_.resize(total_);
    state_.assign(total_, State::at_lower);
    head_.resize(m_);
    sign_ = Vector<Scalar>::Ones(m_);

    lo_.head(n_) = lp_.lower.cwiseQuotient(col_scale_);
    up_.head(n_) = lp_.upper.cwiseQuotient(col_scale_);
    x_.head(n_) = lo_.head(n_);

    Vector<Scalar> residual = b_ - a_ * x_.head(n_);
    for (int i = 0; i < m_; ++i) {
      sign_[i] = residual[i] >= 0 ? Scalar(1) : Scalar(-1);
      lo_[n_ + i] = 0;
      up_[n_ + i] = kInf;
      x_[n_ + i] = std::abs(residual[i]);
      state_[n_ + i] = State::basic;
      head_[i] = n_ + i;
    }
    binv_ = sign_.asDiagonal();
    since_refactor_ = 0;
  }

  Scalar feasibility_scale() const {
    Scalar activity = 0;
    if (m_ > 0) {
      Vector<Scalar> abs_activity = a_.cwiseAbs() * x_.head(n_).cwiseAbs();
      activity = abs_activity.maxCoeff();
    }
    return 1 + (m_ > 0 ? b_.cwiseAbs().maxCoeff() : Scalar(0)) + activity;
  }

  Scalar max_artificial() const {
    return m_ > 0 ? x_.tail(m_).maxCoeff() : Scalar(0);
  }

  Vector<Scalar> column_image(int j) const {
    if (j >= n_) return binv_.col(j - n_) * sign_[j - n_];
    Vector<Scalar> alpha = Vector<Scalar>::Zero(m_);
    for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
      alpha.noalias() += binv_.col(it.row()) * it.value();
    }
    return alpha;
  }

  Scalar column_dot(int j, const Vector<Scalar>& v) const {
    if (j >= n_) return sign_[j - n_] * v[j - n_];
    Scalar sum = 0;
    for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
      sum += it.value() * v[it.row()];
    }
    return sum;
  }

  void refactor() {
    if (m_ > 0) {
      DenseMatrix<Scalar> basis = DenseMatrix<Scalar>::Zero(m_, m_);
      for (int i = 0; i < m_; ++i) {
        const int j = head_[i];
        if (j >= n_) {
          basis(j - n_, i) = sign_[j - n_];
        } else {
          for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
            basis(it.row(), i) = it.value();
          }
        }
      }
      Eigen::FullPivLU<DenseMatrix<Scalar>> lu(basis);
      if (!lu.isInvertible()) throw std::runtime_error("solve_lp: singular basis");
      binv_ = lu.inverse();

      Vector<Scalar> rhs = b_;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == State::basic || x_[j] == Scalar(0)) continue;
        if (j >= n_) {
          rhs[j - n_] -= sign_[j - n_] * x_[j];
        } else {
          for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
            rhs[it.row()] -= it.value() * x_[j];
          }
        }
      }
      Vector<Scalar> xb = binv_ * rhs;
      for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
    }
    since_refactor_ = 0;
  }

  Vector<Scalar> basic_costs(const Vector<Scalar>& cost) const {
    Vector<Scalar> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost[head_[i]];
    return cb;
  }

  // Returns false when the problem is unbounded in the direction of `cost`.
  bool optimize(const Vector<Scalar>& cost) {
    const Scalar pricing_tol =
        Scalar(1e-9) * (1 + (total_ > 0 ? cost.cwiseAbs().maxCoeff() : Scalar(0)));
    int degenerate_run = 0;
    const int iteration_limit = 50000 + 200 * total_;

    for (;;) {
      if (since_refactor_ >= tol_.refactor_interval) refactor();
      const Vector<Scalar> y = binv_.transpose() * basic_costs(cost);
      const bool bland = degenerate_run > tol_.degenerate_pivots_before_bland;

      int entering = -1;
      Scalar best = 0;
      Scalar entering_d = 0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == State::basic || !(up_[j] > lo_[j])) continue;
        const Scalar d = cost[j] - column_dot(j, y);
        const bool improves = (state_[j] == State::at_lower && d > pricing_tol) ||
                              (state_[j] == State::at_upper && d < -pricing_tol);
        if (!improves) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          entering_d = d;
        }
      }

      if (entering < 0) {
        if (since_refactor_ == 0) return true;
        refactor();
        continue;
      }

      const Scalar dir = entering_d > 0 ? Scalar(1) : Scalar(-1);
      const Vector<Scalar> alpha = column_image(entering);

      // Ratio test. row = -1 means the entering variable flips bounds.
      int row = -1;
      Scalar step = up_[entering] - lo_[entering];
      Scalar pivot_size = 0;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= tol_.pivot) continue;
        const int var = head_[i];
        const Scalar rate = -dir * alpha[i];
        Scalar limit;
        if (rate < 0) {
          limit = (x_[var] - lo_[var]) / -rate;
        } else {
          if (!std::isfinite(up_[var])) continue;
          limit = (up_[var] - x_[var]) / rate;
        }
        if (limit < 0) limit = 0;
        const Scalar tie = Scalar(1e-12) * (1 + (std::isfinite(step) ? step : Scalar(0)));
        bool take = false;
        if (!std::isfinite(step) || limit < step - tie) {
          take = true;
        } else if (limit <= step + tie && row >= 0) {
          take = bland ? var < head_[row] : std::abs(alpha[i]) > pivot_size;
        }
        if (take) {
          row = i;
          step = limit;
          pivot_size = std::abs(alpha[i]);
        }
      }
      if (!std::isfinite(step)) return false;

      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * step * alpha[i];
      x_[entering] += dir * step;

      if (row < 0) {
        const bool to_upper = state_[entering] == State::at_lower;
        state_[entering] = to_upper ? State::at_upper : State::at_lower;
        x_[entering] = to_upper ? up_[entering] : lo_[entering];
      } else {
        const int leaving = head_[row];
        const bool hits_lower = -dir * alpha[row] < 0;
        state_[leaving] = hits_lower ? State::at_lower : State::at_upper;
        x_[leaving] = hits_lower ? lo_[leaving] : up_[leaving];
        state_[entering] = State::basic;
        head_[row] = entering;

        const Scalar pivot = alpha[row];
        binv_.row(row) /= pivot;
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pivot_row = binv_.row(row);
        binv_.noalias() -= alpha * pivot_row;
        binv_.row(row) = pivot_row;
        ++since_refactor_;
      }

      degenerate_run = step <= Scalar(1e-12) ? degenerate_run + 1 : 0;
      if (++iterations_ > iteration_limit) {
        throw std::runtime_error("solve_lp: iteration limit exceeded");
      }
    }
  }

  // After phase 1: fix artificials at zero and pivot basic ones out where a
  // structural column can replace them. The rest mark redundant rows.
  void retire_artificials() {
    for (int i = 0; i < m_; ++i) {
      up_[n_ + i] = 0;
      if (state_[n_ + i] != State::basic) x_[n_ + i] = 0;
    }
    for (int r = 0; r < m_; ++r) {
      if (head_[r] < n_) continue;
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> binv_row = binv_.row(r);
      int best = -1;
      Scalar best_size = Scalar(1e-7);
      for (int j = 0; j < n_; ++j) {
        if (state_[j] == State::basic) continue;
        Scalar entry = 0;
        for (typename SparseMatrix<Scalar>::InnerIterator it(a_, j); it; ++it) {
          entry += binv_row[it.row()] * it.value();
        }
        if (std::abs(entry) > best_size) {
          best_size = std::abs(entry);
          best = j;
        }
      }
      if (best < 0) continue;
      const Vector<Scalar> alpha = column_image(best);
      const int leaving = head_[r];
      state_[leaving] = State::at_lower;
      x_[leaving] = 0;
      state_[best] = State::basic;
      head_[r] = best;
      binv_.row(r) /= alpha[r];
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pivot_row = binv_.row(r);
      binv_.noalias() -= alpha * pivot_row;
      binv_.row(r) = pivot_row;
    }
    refactor();
  }

  void finalize(const Vector<Scalar>& cost, LpSolution<Scalar>& out) {
    refactor();
    for (int i = 0; i < m_; ++i) {
      const int var = head_[i];
      if (std::abs(x_[var] - lo_[var]) <= tol_.feasibility * (1 + std::abs(lo_[var]))) {
        x_[var] = lo_[var];
      } else if (std::isfinite(up_[var]) &&
                 std::abs(x_[var] - up_[var]) <= tol_.feasibility * (1 + std::abs(up_[var]))) {
        x_[var] = up_[var];
      }
      if (x_[var] == lo_[var] || x_[var] == up_[var]) out.degenerate = true;
    }

    const Vector<Scalar> y = binv_.transpose() * basic_costs(cost);
    for (int i = 0; i < m_; ++i) out.row_duals[kept_rows_[i]] = -y[i] * row_scale_[i];

    out.x = x_.head(n_).cwiseProduct(col_scale_);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == State::basic) continue;
      const Scalar d = (cost[j] - column_dot(j, y)) / col_scale_[j];
      out.reduced_costs[j] = d;
      const bool upper_active =
          state_[j] == State::at_upper || (lo_[j] == up_[j] && d > 0);
      if (upper_active) out.bound_duals[j] = d;
    }
    out.objective_value = lp_.objective.dot(out.x);
    out.status = LpStatus::optimal;
    out.iterations = iterations_;
  }

  const LinearProgram<Scalar>& lp_;
  Tolerances<Scalar> tol_;

  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  std::vector<int> kept_rows_;
  SparseMatrix<Scalar> a_;
  Vector<Scalar> b_;
  Vector<Scalar> sign_;
  Vector<Scalar> row_scale_, col_scale_;
  Vector<Scalar> cost_;

  Vector<Scalar> lo_, up_, x_;
  std::vector<State> state_;
  std::vector<int> head_;
  DenseMatrix<Scalar> binv_;
  int since_refactor_ = 0;
  int iterations_ = 0;
};

}  // namespace detail

/// Solves a bounded maximize-form LP. Throws std::invalid_argument on
/// malformed input (dimension mismatch, infinite lower bound, lower > upper).
template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp,
                            const Tolerances<Scalar>& tol = Tolerances<Scalar>{}) {
  return detail::BoundedSimplex<Scalar>(lp, tol).run();
}

}  // namespace pathway
