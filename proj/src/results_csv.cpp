#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

#include "pathway/report.hpp"

namespace pathway {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  return fmt::format("{:.12g}", value);
}

namespace {

// Ids come from the scenario and may contain separators.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void append_rows(std::string& out, const Scenario& scenario, const ManagementSolution& solution,
                 const std::vector<int>* units) {
  const bool priced = solution.optimal();
  auto row = [&](const std::string& id, ElementKind kind, double allocation, double price,
                 double profit, int purchased) {
    out += fmt::format("{},{},{},{},{}", csv_field(id), to_string(kind), format_number(allocation),
                       priced ? format_number(price) : "", format_number(profit));
    if (units) out += fmt::format(",{}", purchased);
    out += '\n';
  };
  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    const auto& s = scenario.suppliers[i];
    const double price = priced ? solution.price[scenario.product_index(s.product)] : 0.0;
    row(s.id, ElementKind::supplier, solution.supply[i], price, solution.profit.supplier[i], 0);
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    const auto& c = scenario.consumers[j];
    const double price = priced ? solution.price[scenario.product_index(c.product)] : 0.0;
    row(c.id, ElementKind::consumer, solution.demand[j], price, solution.profit.consumer[j], 0);
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    const double price = priced ? technology_value(scenario, k, solution.price) : 0.0;
    row(scenario.technologies[k].id, ElementKind::technology, solution.throughput[k], price,
        solution.profit.technology[k], units ? (*units)[k] : 0);
  }
}

void check_solution(const Scenario& scenario, const ManagementSolution& solution) {
  if (solution.supply.size() != static_cast<Eigen::Index>(scenario.suppliers.size()) ||
      solution.demand.size() != static_cast<Eigen::Index>(scenario.consumers.size()) ||
      solution.throughput.size() != static_cast<Eigen::Index>(scenario.technologies.size())) {
    throw ModelError("solution does not belong to this scenario");
  }
}

}  // namespace

std::string solution_csv(const Scenario& scenario, const ManagementSolution& solution) {
  check_solution(scenario, solution);
  std::string out = "element_id,kind,allocation,price_or_blank,profit\n";
  append_rows(out, scenario, solution, nullptr);
  return out;
}

std::string investment_csv(const Scenario& scenario, const InvestmentSolution& solution) {
  check_solution(scenario, solution.management);
  if (solution.units.size() != scenario.technologies.size()) {
    throw ModelError("solution does not belong to this scenario");
  }
  std::string out = "element_id,kind,allocation,price_or_blank,profit,units_purchased\n";
  append_rows(out, scenario, solution.management, &solution.units);
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "tax,budget,emissions,utility_cost,surplus,active_set";
  for (const auto& id : table.product_ids) out += "," + csv_field("price_" + id);
  out += '\n';
  for (const auto& p : table.points) {
    std::string active;
    for (const auto& id : p.active_set) {
      if (!active.empty()) active += ';';
      active += id;
    }
    out += fmt::format("{},{},{},{},{},{}", format_number(p.tax),
                       p.budget ? format_number(*p.budget) : "unlimited",
                       format_number(p.emissions), format_number(p.utility_cost),
                       format_number(p.surplus), csv_field(active));
    for (Eigen::Index q = 0; q < static_cast<Eigen::Index>(table.product_ids.size()); ++q) {
      out += ',';
      if (p.optimal && q < p.prices.size()) out += format_number(p.prices[q]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace pathway
