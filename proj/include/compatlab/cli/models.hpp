#pragma once

// Model blocks of a config and the ensembles they produce.
//
// Coefficients are written as {"c0", "c1", "sin", "sin2", "mean"}:
// f(x, m) = c0 + c1 x + sin * sin(x) + sin2 * sin(x)^2 + mean * m, where m is
// the particle mean (McKean-Vlasov models only).

#include "compatlab/cli/cli.hpp"
#include "compatlab/diagnostics/checks.hpp"
#include "compatlab/paths/solvers.hpp"

#include <optional>

namespace compatlab::cli {

struct Coefficient {
  double c0 = 0, c1 = 0, sin = 0, sin2 = 0, mean = 0;
  double operator()(double x, double m = 0) const;
  bool affine() const { return sin == 0 && sin2 == 0; }
};

Coefficient parse_coefficient(const nlohmann::json& j, const std::string& where, bool allow_mean = false);

/// One-dimensional Ito model from a block with kind "ito".
paths::ItoSpec ito_spec(const nlohmann::json& model);

struct Simulation {
  std::optional<paths::PathEnsemble> driver;
  std::optional<paths::PathEnsemble> solution;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Check> checks;
};

/// Kinds: brownian, ito, anticipating, reversed, tanaka, levy, time_change,
/// mckean_vlasov. Every ensemble carries the config's seed and spec hash.
Simulation simulate_model(const RunConfig& cfg);

/// Mean of E[X_n] for Euler on dX = (a + b X) dt + ... started at x0:
/// m_{k+1} = m_k (1 + b dt) + a dt.
double euler_affine_mean(double x0, double a, double b, double horizon, std::size_t steps);
/// x0 e^{bT} + a (e^{bT} - 1) / b.
double affine_mean(double x0, double a, double b, double horizon);

}  // namespace compatlab::cli
