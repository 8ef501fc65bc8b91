#include "pathway/scenario_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

namespace pathway {

using nlohmann::json;

std::string Diagnostic::to_string() const {
  const char* level = severity == Severity::error ? "error" : "warning";
  if (where.empty()) return fmt::format("{}: {}", level, message);
  return fmt::format("{}: {}: {}", level, where, message);
}

std::size_t ParseResult::error_count() const {
  return std::count_if(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

namespace {

// Walks the document and records schema problems with their JSON pointer.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& out) : out_(out) {}

  void error(const std::string& where, std::string message) {
    out_.push_back({Severity::error, where.empty() ? "/" : where, std::move(message)});
  }

  bool expect_object(const json& node, const std::string& where) {
    if (node.is_object()) return true;
    error(where, fmt::format("expected an object, found {}", node.type_name()));
    return false;
  }

  void reject_unknown(const json& node, const std::string& where,
                      std::initializer_list<const char*> known) {
    for (const auto& item : node.items()) {
      if (std::none_of(known.begin(), known.end(),
                       [&](const char* k) { return item.key() == k; })) {
        error(where + "/" + item.key(), "unknown field");
      }
    }
  }

  template <typename T>
  void read(const json& node, const std::string& where, const char* key, T& value,
            bool required) {
    const std::string path = where + "/" + key;
    auto it = node.find(key);
    if (it == node.end()) {
      if (required) error(path, "missing required field");
      return;
    }
    const json& v = *it;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return error(path, fmt::format("expected a string, found {}", v.type_name()));
      value = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return error(path, fmt::format("expected a boolean, found {}", v.type_name()));
      value = v.get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) {
        return error(path, fmt::format("expected an integer, found {}", v.type_name()));
      }
      const auto wide = v.get<std::int64_t>();
      if (wide < INT32_MIN || wide > INT32_MAX) return error(path, "integer out of range");
      value = static_cast<int>(wide);
    } else {
      if (!v.is_number()) return error(path, fmt::format("expected a number, found {}", v.type_name()));
      value = v.get<double>();
    }
  }

  template <typename Fn>
  void each(const json& doc, const char* key, Fn fn) {
    const std::string where = std::string("/") + key;
    auto it = doc.find(key);
    if (it == doc.end()) return;  // empty list
    if (!it->is_array()) {
      error(where, fmt::format("expected an array, found {}", it->type_name()));
      return;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = fmt::format("{}/{}", where, i);
      if (expect_object((*it)[i], path)) fn((*it)[i], path);
    }
  }

 private:
  std::vector<Diagnostic>& out_;
};

std::string line_col(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return fmt::format("{}:{}", line, col);
}

json to_json(const Scenario& s) {
  json doc = json::object();
  doc["title"] = s.metadata.title;
  doc["currency"] = s.metadata.currency;
  doc["time_basis"] = s.time_basis;
  doc["notes"] = s.metadata.notes;
  json& products = doc["products"] = json::array();
  for (const auto& p : s.products) {
    products.push_back({{"id", p.id}, {"unit", p.unit}, {"is_waste", p.is_waste}});
  }
  json& suppliers = doc["suppliers"] = json::array();
  for (const auto& e : s.suppliers) {
    suppliers.push_back(
        {{"id", e.id}, {"product", e.product}, {"alpha", e.alpha}, {"capacity", e.capacity}});
  }
  json& consumers = doc["consumers"] = json::array();
  for (const auto& e : s.consumers) {
    consumers.push_back(
        {{"id", e.id}, {"product", e.product}, {"alpha", e.alpha}, {"capacity", e.capacity}});
  }
  json& technologies = doc["technologies"] = json::array();
  for (const auto& t : s.technologies) {
    json gamma = json::object();
    for (const auto& [product, factor] : t.gamma) gamma[product] = factor;
    technologies.push_back({{"id", t.id},
                            {"alpha", t.alpha},
                            {"ref_product", t.ref_product},
                            {"capacity_per_unit", t.capacity_per_unit},
                            {"gamma", std::move(gamma)},
                            {"invest_cost", t.invest_cost},
                            {"max_units", t.max_units},
                            {"existing_units", t.existing_units}});
  }
  return doc;
}

// Where an element or product lives in the document, for forwarding
// validation issues.
std::map<std::string, std::string> element_paths(const Scenario& s) {
  std::map<std::string, std::string> paths;
  for (std::size_t i = 0; i < s.products.size(); ++i) {
    paths.emplace(s.products[i].id, fmt::format("/products/{}", i));
  }
  for (std::size_t i = 0; i < s.suppliers.size(); ++i) {
    paths.emplace(s.suppliers[i].id, fmt::format("/suppliers/{}", i));
  }
  for (std::size_t i = 0; i < s.consumers.size(); ++i) {
    paths.emplace(s.consumers[i].id, fmt::format("/consumers/{}", i));
  }
  for (std::size_t i = 0; i < s.technologies.size(); ++i) {
    paths.emplace(s.technologies[i].id, fmt::format("/technologies/{}", i));
  }
  return paths;
}

}  // namespace

ParseResult parse_scenario(std::string_view text) {
  ParseResult result;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann prefixes its own location text; keep only the reason.
    std::string reason = e.what();
    if (auto pos = reason.find(": "); pos != std::string::npos) reason = reason.substr(pos + 2);
    result.diagnostics.push_back({Severity::error, line_col(text, e.byte), reason});
    return result;
  }

  Reader r(result.diagnostics);
  if (!r.expect_object(doc, "")) return result;
  r.reject_unknown(doc, "", {"title", "currency", "time_basis", "notes", "products", "suppliers",
                             "consumers", "technologies"});

  Scenario s;
  r.read(doc, "", "title", s.metadata.title, false);
  r.read(doc, "", "currency", s.metadata.currency, false);
  r.read(doc, "", "time_basis", s.time_basis, false);
  r.read(doc, "", "notes", s.metadata.notes, false);

  r.each(doc, "products", [&](const json& node, const std::string& at) {
    r.reject_unknown(node, at, {"id", "unit", "is_waste"});
    Product p;
    r.read(node, at, "id", p.id, true);
    r.read(node, at, "unit", p.unit, true);
    r.read(node, at, "is_waste", p.is_waste, false);
    s.products.push_back(std::move(p));
  });
  auto read_market = [&](const json& node, const std::string& at, auto& e) {
    r.reject_unknown(node, at, {"id", "product", "alpha", "capacity"});
    r.read(node, at, "id", e.id, true);
    r.read(node, at, "product", e.product, true);
    r.read(node, at, "alpha", e.alpha, true);
    r.read(node, at, "capacity", e.capacity, true);
  };
  r.each(doc, "suppliers", [&](const json& node, const std::string& at) {
    read_market(node, at, s.suppliers.emplace_back());
  });
  r.each(doc, "consumers", [&](const json& node, const std::string& at) {
    read_market(node, at, s.consumers.emplace_back());
  });
  r.each(doc, "technologies", [&](const json& node, const std::string& at) {
    r.reject_unknown(node, at, {"id", "alpha", "ref_product", "capacity_per_unit", "gamma",
                                "invest_cost", "max_units", "existing_units"});
    Technology t;
    r.read(node, at, "id", t.id, true);
    r.read(node, at, "alpha", t.alpha, true);
    r.read(node, at, "ref_product", t.ref_product, true);
    r.read(node, at, "capacity_per_unit", t.capacity_per_unit, true);
    r.read(node, at, "invest_cost", t.invest_cost, false);
    r.read(node, at, "max_units", t.max_units, false);
    r.read(node, at, "existing_units", t.existing_units, false);
    auto g = node.find("gamma");
    if (g == node.end()) {
      r.error(at + "/gamma", "missing required field");
    } else if (r.expect_object(*g, at + "/gamma")) {
      for (const auto& item : g->items()) {
        double factor = 0.0;
        r.read(*g, at + "/gamma", item.key().c_str(), factor, true);
        t.gamma[item.key()] = factor;
      }
    }
    s.technologies.push_back(std::move(t));
  });

  if (result.error_count() > 0) return result;

  const auto paths = element_paths(s);
  for (const auto& issue : validate_scenario(s).issues) {
    auto it = paths.find(issue.where);
    std::string where = it != paths.end() ? it->second : "/";
    std::string message = issue.where.empty()
                              ? issue.message
                              : fmt::format("'{}': {}", issue.where, issue.message);
    result.diagnostics.push_back({issue.severity, std::move(where), std::move(message)});
  }
  if (result.error_count() == 0) result.scenario = std::move(s);
  return result;
}

ParseResult load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult result;
    result.diagnostics.push_back({Severity::error, path.string(), "cannot open file"});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  return to_json(scenario).dump(2) + "\n";
}

std::string scenario_fingerprint(const Scenario& scenario) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : to_json(scenario).dump()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace pathway
