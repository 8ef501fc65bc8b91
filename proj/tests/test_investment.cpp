#include <doctest.h>

#include <random>

#include "pathway/investment.hpp"
#include "support/random_scenario.hpp"

using namespace pathway;
using doctest::Approx;

namespace {

// Each plant unit turns 10 gas (bid 1) into 10 power (bid 3): 20 surplus per unit.
Scenario plant_market() {
  Scenario s;
  s.products = {{"gas", "u", false}, {"power", "u", false}};
  s.suppliers = {{"well", "gas", 1.0, 100.0}};
  s.consumers = {{"city", "power", 3.0, 100.0}};
  Technology t;
  t.id = "plant";
  t.ref_product = "gas";
  t.capacity_per_unit = 10.0;
  t.max_units = 3;
  t.invest_cost = 5.0;
  t.gamma = {{"gas", -1.0}, {"power", 1.0}};
  s.technologies = {t};
  return s;
}

// Unit values 10 (cost 6) and 7 (cost 4), two of each: a small knapsack whose
// relaxation is fractional.
Scenario knapsack() {
  Scenario s;
  s.products = {{"gas", "u", false}, {"power", "u", false}};
  s.suppliers = {{"well", "gas", 1.0, 1000.0}};
  s.consumers = {{"city", "power", 3.0, 1000.0}};
  Technology a;
  a.id = "A";
  a.ref_product = "gas";
  a.capacity_per_unit = 5.0;
  a.max_units = 2;
  a.invest_cost = 6.0;
  a.gamma = {{"gas", -1.0}, {"power", 1.0}};
  Technology b = a;
  b.id = "B";
  b.capacity_per_unit = 3.5;
  b.invest_cost = 4.0;
  s.technologies = {a, b};
  return s;
}

}  // namespace

TEST_CASE("relaxation layout") {
  const Scenario s = knapsack();
  const auto milp = build_investment_milp(s, 10.0);
  const auto& lp = milp.relaxation;
  CHECK(lp.num_rows() == 2 + 2 + 1);
  CHECK(lp.num_vars() == 4 + 2 * 2 + 1);
  REQUIRE(milp.budget_row.has_value());
  CHECK(milp.integer_technologies == std::vector<std::size_t>{0, 1});
  const Eigen::MatrixXd a(lp.rows);
  const auto y0 = milp.integer_columns[0];
  CHECK(a(milp.linking_rows[0], 2) == 1.0);
  CHECK(a(milp.linking_rows[0], y0) == -5.0);
  CHECK(a(*milp.budget_row, y0) == 6.0);
  CHECK(lp.rhs[*milp.budget_row] == 10.0);
  CHECK(lp.upper[y0] == 2.0);
  CHECK(lp.objective[y0] == 0.0);

  const auto charged = build_investment_milp(s, 0.0, true);
  CHECK_FALSE(charged.budget_row.has_value());
  CHECK(charged.relaxation.objective[charged.integer_columns[1]] == -4.0);

  CHECK_THROWS_AS(build_investment_milp(s, -1.0), ModelError);
}

TEST_CASE("budget buys whole units only") {
  const Scenario s = plant_market();
  for (auto [budget, units] : {std::pair{0.0, 0}, {4.99, 0}, {5.0, 1}, {12.0, 2}, {15.0, 3}, {1e6, 3}}) {
    CAPTURE(budget);
    const auto r = solve_investment(s, budget);
    CHECK(r.proven_optimal);
    CHECK(r.units_of(s, "plant") == units);
    CHECK(r.objective == Approx(20.0 * units));
    CHECK(r.budget_used == Approx(5.0 * units));
    CHECK(r.budget_used <= budget + 1e-9);
  }
  CHECK_THROWS_AS(solve_investment(s, -1.0), ModelError);
}

TEST_CASE("charging investment in the objective nets out unit costs") {
  Scenario s = plant_market();
  InvestmentOptions charged;
  charged.invest_in_objective = true;
  auto r = solve_investment(s, 0.0, charged);
  CHECK(r.units[0] == 3);
  CHECK(r.objective == Approx(3 * (20.0 - 5.0)));
  CHECK(r.management.surplus == Approx(60.0));

  s.technologies[0].invest_cost = 25.0;  // dearer than a unit earns
  r = solve_investment(s, 0.0, charged);
  CHECK(r.units[0] == 0);
  CHECK(r.objective == 0.0);
}

TEST_CASE("knapsack picks the best affordable mix") {
  const Scenario s = knapsack();
  const auto r = solve_investment(s, 10.0);
  REQUIRE(r.proven_optimal);
  CHECK(r.units == std::vector<int>{1, 1});
  CHECK(r.objective == Approx(17.0));
  // Relaxation: both B units and a third of an A unit.
  CHECK(r.root_bound == Approx(14.0 + 10.0 / 3.0));
  CHECK(r.node_count > 1);

  const auto brute = brute_force_investment(s, 10.0);
  CHECK(brute.units == r.units);
  CHECK(brute.objective == Approx(r.objective));
}

TEST_CASE("node limit leaves the result unproven") {
  InvestmentOptions opt;
  opt.node_limit = 1;
  const auto r = solve_investment(knapsack(), 10.0, opt);
  CHECK_FALSE(r.proven_optimal);
  CHECK(r.node_count == 1);
  CHECK(r.management.optimal());
}

TEST_CASE("purchases reproduce the management solve with those units") {
  const Scenario s = knapsack();
  const auto r = solve_investment(s, 10.0);
  const auto again = solve_with_units(s, r.units);
  CHECK(again.surplus == Approx(r.management.surplus));
  CHECK_THROWS_AS(solve_with_units(s, {1}), ModelError);
  CHECK_THROWS_AS(r.units_of(s, "C"), ModelError);
}

TEST_CASE("brute force refuses oversized enumerations") {
  Scenario s = knapsack();
  s.technologies[0].max_units = 300;
  s.technologies[1].max_units = 300;
  CHECK_THROWS_AS(brute_force_investment(s, 10.0), ModelError);
}

TEST_CASE("no purchasable units reduces to the management model") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario s = testing::random_scenario(rng);
    const auto r = solve_investment(s, 5.0);
    CHECK(r.node_count <= 1);
    CHECK(r.objective == Approx(solve_management(s).surplus).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("branch and bound agrees with enumeration on random graphs") {
  std::mt19937_64 rng(22);
  testing::RandomScenarioOptions opt;
  opt.max_purchasable_units = 8;
  std::uniform_real_distribution<double> budget(0.0, 30.0);
  for (int trial = 0; trial < 80; ++trial) {
    const Scenario s = testing::random_scenario(rng, opt);
    const double b = std::round(budget(rng));
    for (bool charged : {false, true}) {
      InvestmentOptions io;
      io.invest_in_objective = charged;
      const auto bb = solve_investment(s, b, io);
      const auto brute = brute_force_investment(s, b, 65'536, io);
      REQUIRE(bb.proven_optimal);
      CHECK(std::abs(bb.objective - brute.objective) <= 1e-9 * (1 + std::abs(brute.objective)));
      if (!charged) CHECK(bb.budget_used <= b + 1e-9);
      CHECK(bb.root_bound >= bb.objective - 1e-9 * (1 + std::abs(bb.objective)));
    }
  }
}

TEST_CASE("objective never falls as the budget grows") {
  std::mt19937_64 rng(23);
  testing::RandomScenarioOptions opt;
  opt.max_purchasable_units = 6;
  for (int trial = 0; trial < 40; ++trial) {
    const Scenario s = testing::random_scenario(rng, opt);
    double previous = -std::numeric_limits<double>::infinity();
    for (double b : {0.0, 5.0, 10.0, 20.0, 40.0}) {
      const double obj = solve_investment(s, b).objective;
      CHECK(obj >= previous - 1e-9 * (1 + std::abs(previous)));
      previous = obj;
    }
  }
}

TEST_CASE("ample budget matches the fully built management model") {
  std::mt19937_64 rng(24);
  testing::RandomScenarioOptions opt;
  opt.max_purchasable_units = 8;
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario s = testing::random_scenario(rng, opt);
    double everything = 0.0;
    for (const auto& t : s.technologies) everything += t.invest_cost * t.max_units;
    const auto r = solve_investment(s, everything);
    const auto built = solve_management(with_all_units_built(s));
    CHECK(std::abs(r.objective - built.surplus) <= 1e-9 * (1 + std::abs(built.surplus)));
  }
}
