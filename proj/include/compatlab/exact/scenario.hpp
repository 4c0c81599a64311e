#pragma once

// JSON scenario files for the exact engine and JSON rendering of its reports.
// Exact values are rendered as "p/q" strings; float-mode values as numbers.

#include "compatlab/exact/compat.hpp"

#include "json.hpp"

namespace compatlab::exact {

inline constexpr const char* kScenarioSchema = "compatlab.scenario/1";
inline constexpr const char* kScenarioReportSchema = "compatlab.scenario-report/1";

template <class Num>
nlohmann::json number_json(const Num& v) {
  if constexpr (NumTraits<Num>::exact)
    return NumTraits<Num>::render(v);
  else
    return v;
}

template <class Num>
nlohmann::json to_json(const CheckReport<Num>& r) {
  nlohmann::json alphas = nlohmann::json::array();
  for (const auto& a : r.alphas) {
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& [name, dev] : a.per_test) tests.push_back({{"h", name}, {"deviation", number_json(dev)}});
    alphas.push_back({{"alpha", a.alpha}, {"max_deviation", number_json(a.max_deviation)}, {"pass", a.pass},
                      {"tests", std::move(tests)}});
  }
  return {{"kind", r.kind}, {"pass", r.pass}, {"alphas", std::move(alphas)}};
}

/// Runs every check listed in a scenario document. Throws ConfigError when the
/// document does not follow the schema. The report's "pass" is true when every
/// check outcome matches its "expect" field (default "pass").
nlohmann::json run_scenario(const nlohmann::json& doc);

}  // namespace compatlab::exact
