#include "compatlab/cli/models.hpp"
#include "compatlab/cli/json_util.hpp"

#include "compatlab/diagnostics/controls.hpp"

#include <cmath>

namespace compatlab::cli {

using nlohmann::json;
using paths::PathEnsemble;
using paths::TimeGrid;

double Coefficient::operator()(double x, double m) const {
  const double s = std::sin(x);
  return c0 + c1 * x + sin * s + sin2 * s * s + mean * m;
}

Coefficient parse_coefficient(const json& j, const std::string& where, bool allow_mean) {
  if (j.is_number()) return {j.get<double>()};
  require_keys(j, where, {"c0", "c1", "sin", "sin2", "mean"});
  if (!allow_mean && j.contains("mean")) throw ConfigError("'mean' is only allowed in McKean-Vlasov coefficients");
  Coefficient c;
  c.c0 = get_or(j, "c0", 0.0);
  c.c1 = get_or(j, "c1", 0.0);
  c.sin = get_or(j, "sin", 0.0);
  c.sin2 = get_or(j, "sin2", 0.0);
  c.mean = get_or(j, "mean", 0.0);
  return c;
}

paths::ItoSpec ito_spec(const json& model) {
  const Coefficient b = parse_coefficient(model.value("drift", json::object()), "model.drift");
  const Coefficient s = parse_coefficient(model.value("sigma", json::object()), "model.sigma");
  paths::ItoSpec spec;
  spec.drift = [b](const double* x, double* out) { out[0] = b(x[0]); };
  spec.sigma = [s](const double* x, double* out) { out[0] = s(x[0]); };
  return spec;
}

double euler_affine_mean(double x0, double a, double b, double horizon, std::size_t steps) {
  const TimeGrid g(horizon, steps);
  double m = x0;
  for (std::size_t k = 0; k < steps; ++k) m = m * (1 + b * g.dt(k)) + a * g.dt(k);
  return m;
}

double affine_mean(double x0, double a, double b, double horizon) {
  if (b == 0) return x0 + a * horizon;
  const double e = std::exp(b * horizon);
  return x0 * e + a * (e - 1) / b;
}

namespace {

// Terminal mean of dimension 0 against a closed form, allowing the scheme's
// own deterministic bias |discrete - continuous|.
Check terminal_mean_check(const PathEnsemble& x, double expected, double discrete) {
  const std::size_t n = x.grid().steps();
  double sum = 0, sq = 0;
  for (std::size_t p = 0; p < x.paths(); ++p) {
    sum += x(p, n);
    sq += x(p, n) * x(p, n);
  }
  const double P = static_cast<double>(x.paths());
  const double mean = sum / P;
  const double var = x.paths() > 1 ? std::max(0.0, (sq - P * mean * mean) / (P - 1)) : 0.0;
  const double se = std::sqrt(var / P);
  const double bias = std::abs(discrete - expected);
  const bool pass = std::abs(mean - expected) <= 4 * se + bias + 1e-12 * std::max(1.0, std::abs(expected));
  return {"terminal_mean",
          pass,
          {{"mean", mean}, {"se", se}, {"expected", expected}, {"scheme_bias", bias}, {"tolerance", 4 * se + bias}}};
}

void stamp(PathEnsemble& e, const RunConfig& cfg) {
  e.provenance().seed = cfg.seed;
  e.provenance().spec_hash = cfg.spec_hash;
}

}  // namespace

Simulation simulate_model(const RunConfig& cfg) {
  const json& m = cfg.model;
  if (!m.contains("kind")) throw ConfigError("model block needs a 'kind'");
  const std::string kind = get_or<std::string>(m, "kind", "");
  const TimeGrid grid(cfg.horizon, cfg.steps);
  Simulation sim;
  sim.summary["kind"] = kind;

  if (kind == "brownian" || kind == "anticipating" || kind == "reversed") {
    require_keys(m, "model", {"kind", "dims"});
    const std::size_t dims = get_or<std::size_t>(m, "dims", 1);
    if (dims == 0) throw ConfigError("dims must be positive");
    auto w = paths::brownian(grid, dims, cfg.paths, cfg.seed);
    stamp(w, cfg);
    sim.driver = w;
    if (kind == "anticipating") sim.solution = diagnostics::anticipating_control(w);
    if (kind == "reversed") sim.solution = diagnostics::time_reversed(w);
    sim.checks.push_back(terminal_mean_check(sim.solution ? *sim.solution : w, 0, 0));
  } else if (kind == "ito") {
    require_keys(m, "model", {"kind", "x0", "drift", "sigma"});
    const double x0 = get_or(m, "x0", 0.0);
    auto w = paths::brownian(grid, 1, cfg.paths, cfg.seed);
    stamp(w, cfg);
    sim.driver = w;
    sim.solution = paths::euler_ito(ito_spec(m), {x0}, w);
    const Coefficient b = parse_coefficient(m.value("drift", json::object()), "model.drift");
    if (b.affine())
      sim.checks.push_back(terminal_mean_check(*sim.solution, affine_mean(x0, b.c0, b.c1, cfg.horizon),
                                               euler_affine_mean(x0, b.c0, b.c1, cfg.horizon, cfg.steps)));
  } else if (kind == "tanaka") {
    require_keys(m, "model", {"kind"});
    auto b = paths::brownian(grid, 1, cfg.paths, cfg.seed);
    stamp(b, cfg);
    sim.driver = diagnostics::tanaka_driver(b);
    sim.solution = diagnostics::solve_with_aux(diagnostics::tanaka_solver(), *sim.driver, 1, cfg.seed, 0);
    sim.checks.push_back(terminal_mean_check(*sim.solution, 0, 0));
  } else if (kind == "levy") {
    require_keys(m, "model", {"kind", "x0", "rate", "jump_values", "jump_probs", "jump_bound", "drift", "diffusion",
                              "integrand"});
    paths::LevySpec spec;
    spec.rate = get_or(m, "rate", 0.0);
    spec.jump_values = m.value("jump_values", std::vector<double>{});
    spec.jump_probs = m.value("jump_probs", std::vector<double>{});
    spec.jump_bound = get_or(m, "jump_bound", 1.0);
    spec.drift = get_or(m, "drift", 0.0);
    spec.diffusion = get_or(m, "diffusion", 0.0);
    const double x0 = get_or(m, "x0", 0.0);
    const Coefficient h = parse_coefficient(m.value("integrand", json(1.0)), "model.integrand");
    auto r = paths::levy_driver(spec, grid, cfg.paths, cfg.seed);
    stamp(r.V, cfg);
    PathEnsemble u(grid, cfg.paths, 1, r.V.provenance());
    for (std::size_t p = 0; p < cfg.paths; ++p)
      for (std::size_t k = 0; k < grid.points(); ++k) u(p, k) = x0;
    paths::SemimartingaleSpec s;
    s.integrand = [h](const paths::PathPrefix& x, std::size_t k, double, double* out) { out[0] = h(x(k)); };
    sim.driver = r.V;
    sim.solution = paths::euler_semimartingale(s, u, r.V);
    double jumps = 0;
    for (auto c : r.jump_counts) jumps += static_cast<double>(c);
    sim.summary["mean_jump_count"] = jumps / static_cast<double>(cfg.paths);
  } else if (kind == "time_change") {
    require_keys(m, "model", {"kind", "x0", "clocks", "drift"});
    const double x0 = get_or(m, "x0", 0.0);
    if (!m.contains("clocks") || !m["clocks"].is_array() || m["clocks"].empty())
      throw ConfigError("time_change needs a non-empty 'clocks' list");
    std::vector<Coefficient> beta;
    paths::TimeChangeSpec spec;
    for (const auto& c : m["clocks"]) {
      require_keys(c, "model.clocks[]", {"beta", "zeta"});
      if (!c.contains("beta")) throw ConfigError("each clock needs 'beta'");
      beta.push_back(parse_coefficient(c["beta"], "model.clocks[].beta"));
      spec.zeta.push_back({get_or(c, "zeta", 1.0)});
    }
    spec.clocks = beta.size();
    spec.beta = [beta](std::size_t k, const double* x) { return beta[k](x[0]); };
    Coefficient f;
    if (m.contains("drift")) {
      f = parse_coefficient(m["drift"], "model.drift");
      spec.drift = [f](const double* x, double* out) { out[0] = f(x[0]); };
    }
    auto r = paths::time_change_euler(spec, {x0}, grid, cfg.paths, cfg.seed);
    stamp(r.x, cfg);
    sim.solution = r.x;
    if (!m.contains("drift")) sim.checks.push_back(terminal_mean_check(*sim.solution, x0, x0));
  } else if (kind == "mckean_vlasov") {
    require_keys(m, "model", {"kind", "drift", "sigma", "x0_mean", "x0_sd"});
    const Coefficient b = parse_coefficient(m.value("drift", json::object()), "model.drift", true);
    const Coefficient s = parse_coefficient(m.value("sigma", json::object()), "model.sigma", true);
    const double mu0 = get_or(m, "x0_mean", 0.0), sd0 = get_or(m, "x0_sd", 0.0);
    paths::McKeanVlasovSpec spec;
    spec.drift = [b](const double* x, const paths::EmpiricalLaw& law, double* out) { out[0] = b(x[0], law.mean()); };
    spec.sigma = [s](const double* x, const paths::EmpiricalLaw& law, double* out) { out[0] = s(x[0], law.mean()); };
    spec.initial = [mu0, sd0](std::size_t, paths::Stream& st, double* out) { out[0] = mu0 + sd0 * st.normal(); };
    if (cfg.paths < 2) throw ConfigError("McKean-Vlasov models need at least two particles");
    auto x = paths::mckean_vlasov(spec, cfg.paths, grid, cfg.seed);
    stamp(x, cfg);
    sim.solution = x;
    // With affine drift the particle mean follows m' = c0 + (c1 + mean) m up to
    // the initial sampling error, which the 4 SE band covers.
    if (b.affine())
      sim.checks.push_back(terminal_mean_check(x, affine_mean(mu0, b.c0, b.c1 + b.mean, cfg.horizon),
                                               euler_affine_mean(mu0, b.c0, b.c1 + b.mean, cfg.horizon, cfg.steps)));
  } else {
    throw ConfigError("unknown model kind '" + kind + "'");
  }
  if (sim.solution) stamp(*sim.solution, cfg);
  return sim;
}

}  // namespace compatlab::cli
