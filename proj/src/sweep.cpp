#include "pathway/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "pathway/management.hpp"
#include "pathway/scenario_io.hpp"

namespace pathway {

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ModelError("grid needs at least one point");
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) {
    values[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  if (n > 1) values.back() = hi;
  return values;
}

std::vector<double> parse_grid(const std::string& text) {
  std::istringstream in(text);
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof() || n < 1) {
    throw ModelError(fmt::format("malformed grid '{}', expected lo:hi:n", text));
  }
  return linspace(lo, hi, n);
}

SweepTable SweepTable::budget_column(std::size_t budget_index) const {
  if (budget_index >= budget_count()) throw ModelError("budget index out of range");
  SweepTable column;
  column.fingerprint = fingerprint;
  column.waste_product = waste_product;
  column.taxes = taxes;
  if (!budgets.empty()) column.budgets = {budgets[budget_index]};
  column.product_ids = product_ids;
  for (std::size_t t = 0; t < taxes.size(); ++t) column.points.push_back(at(t, budget_index));
  return column;
}

Scenario with_tax(const Scenario& scenario, const std::string& waste_product, double tax) {
  const Product& product = scenario.product(waste_product);
  if (!product.is_waste) {
    throw ModelError(fmt::format("product '{}' is not flagged as waste", waste_product));
  }
  Scenario taxed = scenario;
  Consumer* target = nullptr;
  for (auto& c : taxed.consumers) {
    if (c.product != waste_product) continue;
    if (target) {
      throw ModelError(fmt::format("waste product '{}' has more than one consumer", waste_product));
    }
    target = &c;
  }
  if (!target) throw ModelError(fmt::format("missing waste consumer for '{}'", waste_product));
  target->alpha = -tax;
  return taxed;
}

namespace {

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PATHWAY_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i in [0, count). Cells write only their own slot, so the
// result does not depend on scheduling.
template <typename Task>
void run_cells(std::size_t count, unsigned threads, Task task) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SweepPoint summarize(const Scenario& scenario, const ManagementSolution& solution, double tax,
                     double activity_tol) {
  SweepPoint point;
  point.tax = tax;
  point.optimal = solution.optimal();
  point.degenerate = solution.degenerate;
  point.emissions = waste_flow(scenario, solution);
  point.utility_cost = utility_cost(scenario, solution);
  point.surplus = solution.surplus;
  point.prices = solution.price;
  point.active_set = active_technologies(scenario, solution, activity_tol);
  return point;
}

SweepTable empty_table(const Scenario& scenario, const std::string& waste_product,
                       const std::vector<double>& taxes) {
  with_tax(scenario, waste_product, 0.0);  // checks the waste consumer up front
  require_valid(scenario);
  if (taxes.empty()) throw ModelError("tax grid is empty");
  SweepTable table;
  table.fingerprint = scenario_fingerprint(scenario);
  table.waste_product = waste_product;
  table.taxes = taxes;
  for (const auto& p : scenario.products) table.product_ids.push_back(p.id);
  return table;
}

}  // namespace

SweepTable sweep_tax(const Scenario& scenario, const std::string& waste_product,
                     const std::vector<double>& taxes, const SweepOptions& options) {
  SweepTable table = empty_table(scenario, waste_product, taxes);
  const Scenario base = options.assume_built ? with_all_units_built(scenario) : scenario;
  const double activity_tol = options.activity_tol.value_or(default_activity_tol(scenario));

  table.points.resize(taxes.size());
  run_cells(taxes.size(), worker_count(options.threads), [&](std::size_t i) {
    const Scenario taxed = with_tax(base, waste_product, taxes[i]);
    const auto solution = solve_management(taxed, options.investment.lp_tol);
    table.points[i] = summarize(taxed, solution, taxes[i], activity_tol);
  });
  return table;
}

SweepTable sweep_tax_budget(const Scenario& scenario, const std::string& waste_product,
                            const std::vector<double>& taxes, const std::vector<double>& budgets,
                            const SweepOptions& options) {
  SweepTable table = empty_table(scenario, waste_product, taxes);
  if (budgets.empty()) throw ModelError("budget grid is empty");
  for (double b : budgets) {
    if (!(b >= 0.0)) throw ModelError("budgets must be >= 0");
  }
  table.budgets = budgets;
  const double activity_tol = options.activity_tol.value_or(default_activity_tol(scenario));

  const std::size_t nb = budgets.size();
  table.points.resize(taxes.size() * nb);
  run_cells(table.points.size(), worker_count(options.threads), [&](std::size_t cell) {
    const double tax = taxes[cell / nb];
    const double budget = budgets[cell % nb];
    const Scenario taxed = with_tax(scenario, waste_product, tax);
    const auto result = solve_investment(taxed, budget, options.investment);
    SweepPoint point = summarize(taxed, result.management, tax, activity_tol);
    point.budget = budget;
    point.surplus = result.objective;
    point.units = result.units;
    point.optimal = point.optimal && result.proven_optimal;
    table.points[cell] = std::move(point);
  });
  return table;
}

std::vector<PathwayInterval> detect_breakpoints(const SweepTable& table) {
  if (table.points.empty()) throw ModelError("sweep table is empty");
  if (table.budgets.size() > 1) {
    throw ModelError("detect_breakpoints needs a single budget column");
  }
  std::vector<PathwayInterval> runs;
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    const auto& point = table.points[i];
    if (runs.empty() || runs.back().active_set != point.active_set) {
      runs.push_back({point.tax, point.tax, i, i, point.active_set});
    } else {
      runs.back().to = point.tax;
      runs.back().last = i;
    }
  }
  return runs;
}

}  // namespace pathway
