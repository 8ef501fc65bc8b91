#include <doctest.h>

#include <random>

#include "pathway/kkt.hpp"
#include "pathway/simplex.hpp"
#include "support/lp_oracle.hpp"
#include "support/random_lp.hpp"

using namespace pathway;
using pathway::testing::enumerate_lp;

namespace {

LinearProgram<double> dense_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c, const Eigen::VectorXd& upper) {
  LinearProgram<double> lp(a.rows(), a.cols());
  lp.rows = a.sparseView();
  lp.rhs = b;
  lp.objective = c;
  lp.upper = upper;
  return lp;
}

// maximize 2d − s  s.t.  s − d = 0,  s ∈ [0, 5],  d ∈ [0, 10]
LinearProgram<double> market_lp() {
  Eigen::MatrixXd a(1, 2);
  a << 1, -1;
  return dense_lp(a, Eigen::VectorXd::Zero(1), Eigen::Vector2d(-1, 2), Eigen::Vector2d(5, 10));
}

}  // namespace

TEST_CASE("single variable runs to its upper bound") {
  LinearProgram<double> lp(0, 1);
  lp.objective << 2;
  lp.upper << 5;
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(5));
  CHECK(sol.objective_value == doctest::Approx(10));
  CHECK(sol.bound_duals[0] == doctest::Approx(2));
  CHECK(verify_kkt(lp, sol).all_pass());
}

TEST_CASE("empty row with nonzero rhs is infeasible") {
  LinearProgram<double> lp(1, 1);
  lp.rhs << 1;
  lp.upper << 3;
  CHECK(solve_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("inconsistent rows are infeasible") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  auto lp = dense_lp(a, Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 1), Eigen::Vector2d(5, 5));
  CHECK(solve_lp(lp).status == LpStatus::infeasible);
  CHECK_FALSE(enumerate_lp(lp).has_value());
}

TEST_CASE("infinite upper bound with improving direction is unbounded") {
  LinearProgram<double> lp(0, 1);
  lp.objective << 1;
  CHECK(solve_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("two-variable market clears at the consumer bid") {
  auto lp = market_lp();
  // The four basic points are (0,0), (5,5), and two infeasible corners;
  // (5,5) is optimal with d strictly inside its bounds, so 2 − y = 0.
  auto oracle = enumerate_lp(lp);
  REQUIRE(oracle.has_value());
  CHECK(oracle->objective == doctest::Approx(5));

  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(5));
  CHECK(sol.x[1] == doctest::Approx(5));
  CHECK(sol.objective_value == doctest::Approx(5));
  CHECK(sol.row_duals[0] == doctest::Approx(2));
  CHECK(sol.bound_duals[0] == doctest::Approx(1));  // supplier: −1 + 2 − λ = 0
  CHECK(sol.bound_duals[1] == doctest::Approx(0));
  CHECK(dual_objective(lp, sol) == doctest::Approx(sol.objective_value));
}

TEST_CASE("verify_kkt flags bound violations and wrong duals") {
  auto lp = market_lp();
  auto sol = solve_lp(lp);
  REQUIRE(verify_kkt(lp, sol).all_pass());

  SUBCASE("bound violation") {
    auto bad = sol;
    bad.x[0] = 6;
    bad.x[1] = 6;
    auto report = verify_kkt(lp, bad);
    CHECK_FALSE(report.primal_feasibility.pass);
    CHECK(report.primal_feasibility.max_violation == doctest::Approx(1.0));
  }
  SUBCASE("perturbed row dual") {
    auto bad = sol;
    bad.row_duals[0] += 0.1;
    auto report = verify_kkt(lp, bad);
    CHECK_FALSE(report.stationarity.pass);
    CHECK(report.stationarity.max_violation == doctest::Approx(0.1));
    CHECK(report.primal_feasibility.pass);
  }
  SUBCASE("negative multiplier") {
    auto bad = sol;
    bad.bound_duals[1] = -1;
    bad.reduced_costs[1] = -1;
    CHECK_FALSE(verify_kkt(lp, bad).dual_feasibility.pass);
  }
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  // minimize −3/4 x4 + 20 x5 − 1/2 x6 + 6 x7 with slacks x1..x3, boxed at 100.
  Eigen::MatrixXd a(3, 7);
  a << 1, 0, 0, 0.25, -8, -1, 9,
       0, 1, 0, 0.5, -12, -0.5, 3,
       0, 0, 1, 0, 0, 1, 0;
  Eigen::VectorXd c(7);
  c << 0, 0, 0, 0.75, -20, 0.5, -6;
  auto lp = dense_lp(a, Eigen::Vector3d(0, 0, 1), c, Eigen::VectorXd::Constant(7, 100));
  auto oracle = enumerate_lp(lp);
  REQUIRE(oracle.has_value());

  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(oracle->objective).epsilon(1e-9));
  CHECK(verify_kkt(lp, sol).all_pass());
}

TEST_CASE("redundant equality rows keep a valid certificate") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 0, 0, 1, 1, 1, 2, 1;  // row 3 = row 1 + row 2
  auto lp = dense_lp(a, Eigen::Vector3d(2, 3, 5), Eigen::Vector3d(1, -1, 2), Eigen::Vector3d::Constant(4));
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(enumerate_lp(lp)->objective));
  CHECK(verify_kkt(lp, sol).all_pass());
  CHECK(sol.degenerate);
}

TEST_CASE("random small LPs agree with vertex enumeration") {
  std::mt19937_64 rng(20240611);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto lp = testing::random_lp(rng);
    auto sol = solve_lp(lp);
    auto oracle = enumerate_lp(lp);
    CAPTURE(trial);
    if (!oracle) {
      CHECK(sol.status == LpStatus::infeasible);
      continue;
    }
    REQUIRE(sol.status == LpStatus::optimal);
    ++optimal;
    CHECK(std::abs(sol.objective_value - oracle->objective) <=
          1e-8 * (1 + std::abs(oracle->objective)));
    CHECK(verify_kkt(lp, sol).all_pass());
    CHECK(std::abs(dual_objective(lp, sol) - sol.objective_value) <=
          1e-6 * (1 + std::abs(sol.objective_value)));

    auto again = solve_lp(lp);
    CHECK(again.x == sol.x);
    CHECK(again.row_duals == sol.row_duals);
  }
  CHECK(optimal > 150);
}

TEST_CASE("float scalar instantiation solves the market problem") {
  LinearProgram<float> lp(1, 2);
  std::vector<Eigen::Triplet<float>> t{{0, 0, 1.f}, {0, 1, -1.f}};
  lp.rows.setFromTriplets(t.begin(), t.end());
  lp.objective << -1.f, 2.f;
  lp.upper << 5.f, 10.f;
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective_value == doctest::Approx(5.0));
}

TEST_CASE("malformed problems are rejected") {
  LinearProgram<double> lp(0, 1);
  lp.lower << 2;
  lp.upper << 1;
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}
