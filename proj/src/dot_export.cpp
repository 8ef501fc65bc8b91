#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/core.h>

#include "pathway/report.hpp"

namespace pathway {

namespace {

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string short_number(double value) {
  if (value == 0.0) return "0";
  return fmt::format("{:.6g}", value);
}

struct Node {
  std::string key;
  std::string attributes;
};

struct Edge {
  std::string tail;
  std::string head;
  std::string attributes;
};

const char* style(bool active) { return active ? "color=black, fontcolor=black" : "color=gray, fontcolor=gray"; }

}  // namespace

std::string export_dot(const Scenario& scenario, const ManagementSolution* solution,
                       const DotOptions& options) {
  const bool solved = solution && solution->optimal();
  if (solution) {
    if (solution->supply.size() != static_cast<Eigen::Index>(scenario.suppliers.size()) ||
        solution->demand.size() != static_cast<Eigen::Index>(scenario.consumers.size()) ||
        solution->throughput.size() != static_cast<Eigen::Index>(scenario.technologies.size()) ||
        (solved && solution->price.size() != static_cast<Eigen::Index>(scenario.products.size()))) {
      throw ModelError("solution does not belong to this scenario");
    }
  }
  const double tol = options.activity_tol.value_or(default_activity_tol(scenario));
  auto product_key = [](const std::string& id) { return quote("product:" + id); };
  auto element_key = [](const std::string& id) { return quote("element:" + id); };

  std::vector<Node> nodes;
  std::vector<Edge> edges;

  for (std::size_t p = 0; p < scenario.products.size(); ++p) {
    const auto& product = scenario.products[p];
    std::string label = fmt::format("{}\\n[{}]", product.id, product.unit);
    if (solved) label += fmt::format("\\nprice {}", short_number(solution->price[p]));
    nodes.push_back({product_key(product.id),
                     fmt::format("shape=ellipse{}, label={}", product.is_waste ? ", style=dashed" : "",
                                 quote(label))});
  }

  auto add_element = [&](const std::string& id, const char* kind, double allocation) {
    const bool active = !solved || allocation > tol;
    std::string label = fmt::format("{}\\n({})", id, kind);
    if (solved) label += fmt::format("\\n{}", short_number(allocation));
    nodes.push_back({element_key(id), fmt::format("shape=box, {}, label={}", style(active), quote(label))});
    return active;
  };
  auto edge_label = [&](double flow, double factor) {
    return solved ? short_number(std::abs(flow)) : short_number(factor);
  };

  for (std::size_t i = 0; i < scenario.suppliers.size(); ++i) {
    const auto& s = scenario.suppliers[i];
    const double flow = solved ? solution->supply[i] : 0.0;
    const bool active = add_element(s.id, "supplier", flow);
    edges.push_back({element_key(s.id), product_key(s.product),
                     fmt::format("{}, label={}", style(active), quote(edge_label(flow, 1.0)))});
  }
  for (std::size_t j = 0; j < scenario.consumers.size(); ++j) {
    const auto& c = scenario.consumers[j];
    const double flow = solved ? solution->demand[j] : 0.0;
    const bool active = add_element(c.id, "consumer", flow);
    edges.push_back({product_key(c.product), element_key(c.id),
                     fmt::format("{}, label={}", style(active), quote(edge_label(flow, -1.0)))});
  }
  for (std::size_t k = 0; k < scenario.technologies.size(); ++k) {
    const auto& tech = scenario.technologies[k];
    const double throughput = solved ? solution->throughput[k] : 0.0;
    const bool active = add_element(tech.id, "technology", throughput);
    for (const auto& [product, factor] : tech.gamma) {
      if (factor == 0.0) continue;
      const std::string attrs = fmt::format("{}, label={}", style(active),
                                            quote(edge_label(factor * throughput, factor)));
      if (factor < 0.0) {
        edges.push_back({product_key(product), element_key(tech.id), attrs});
      } else {
        edges.push_back({element_key(tech.id), product_key(product), attrs});
      }
    }
  }

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.key < b.key; });
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.tail, a.head, a.attributes) < std::tie(b.tail, b.head, b.attributes);
  });

  std::string out = fmt::format("digraph {} {{\n", quote(options.graph_name));
  out += "  rankdir=LR;\n";
  if (solution) {
    std::string label = fmt::format("status {}", to_string(solution->status));
    if (solved) label += fmt::format(", surplus {}", short_number(solution->surplus));
    if (solution->degenerate) label += "\\ndegenerate solve: prices may not be unique";
    out += fmt::format("  label={};\n  labelloc=t;\n", quote(label));
  }
  for (const auto& n : nodes) out += fmt::format("  {} [{}];\n", n.key, n.attributes);
  for (const auto& e : edges) out += fmt::format("  {} -> {} [{}];\n", e.tail, e.head, e.attributes);
  out += "}\n";
  return out;
}

}  // namespace pathway
