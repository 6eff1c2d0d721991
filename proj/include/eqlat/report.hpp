#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "linalg.hpp"

namespace eqlat {

struct Premise {
  std::string name;
  bool satisfied = false;
  double value = 0.0;
};

// Uniform carrier for one evaluated inequality. kind distinguishes proved
// bounds (a violation is an implementation bug), premise checks (may
// legitimately fail at desk scale) and informational tabulations.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double tolerance = 0.0;
  std::string kind = "proved";  // proved | premise | informational
  bool vacuous = false;
  std::vector<Premise> premises;
  std::map<std::string, std::string> convention_notes;
  std::string inputs_digest;

  void set_verdict() { holds = lhs <= rhs + tolerance; }
};

// JSON has no NaN/inf literals; encode non-finite values as strings so the
// sentinel survives serialization.
inline nlohmann::json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json premises = nlohmann::json::array();
  for (const auto& p : r.premises)
    premises.push_back({{"name", p.name}, {"satisfied", p.satisfied}, {"value", json_number(p.value)}});
  return nlohmann::json{{"name", r.name},
                        {"lhs", json_number(r.lhs)},
                        {"rhs", json_number(r.rhs)},
                        {"holds", r.holds},
                        {"tolerance", json_number(r.tolerance)},
                        {"kind", r.kind},
                        {"vacuous", r.vacuous},
                        {"premises", premises},
                        {"convention_notes", r.convention_notes},
                        {"inputs_digest", r.inputs_digest}};
}

// Default convention annotations shared by every report.
inline std::map<std::string, std::string> standard_conventions() {
  return {{"trace_distance", "half (orthogonal pure states at distance 1)"},
          {"log_base", "natural"},
          {"units", "rescaled (terms bounded by 1)"}};
}

}  // namespace eqlat
