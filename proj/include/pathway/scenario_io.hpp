#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathway/model.hpp"

namespace pathway {

struct Diagnostic {
  Severity severity = Severity::error;
  std::string where;  // "line:col" for syntax errors, JSON pointer otherwise
  std::string message;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<Scenario> scenario;  // set only when there are no errors
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return scenario.has_value(); }
  std::size_t error_count() const;
};

/// Reads a scenario document (JSON). Collects every syntax, schema and
/// validation problem instead of stopping at the first.
ParseResult parse_scenario(std::string_view text);
ParseResult load_scenario(const std::filesystem::path& path);

/// Pretty-printed document; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// 64-bit FNV-1a of the compact serialization, as 16 hex digits.
std::string scenario_fingerprint(const Scenario& scenario);

}  // namespace pathway
