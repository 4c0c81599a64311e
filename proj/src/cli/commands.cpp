#include "compatlab/cli/json_util.hpp"
#include "compatlab/cli/models.hpp"

#include "compatlab/diagnostics/controls.hpp"
#include "compatlab/exact/properties.hpp"
#include "compatlab/exact/scenario.hpp"
#include "compatlab/exact/zeta.hpp"
#include "compatlab/paths/io.hpp"

#include <cmath>
#include <fstream>

namespace compatlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using paths::PathEnsemble;

namespace {

PathEnsemble read_ensemble_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open ensemble file '" + file.string() + "'");
  return paths::read_ensemble(in).ensemble;
}

void write_ensemble_file(const fs::path& file, const PathEnsemble& e, const json& summary) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + file.string() + "'");
  paths::write_ensemble(out, e, summary);
}

}  // namespace

SuiteResult cmd_exact(const RunConfig& cfg) {
  require_keys(cfg.section, "exact", {"trials", "families", "scenarios"});
  const auto trials = get_or<std::size_t>(cfg.section, "trials", 100);
  const auto families = get_or<std::size_t>(cfg.section, "families", 500);
  SuiteResult r{"exact", {}, json::object()};

  const auto zeta = exact::zeta_counterexample<exact::Rational>();
  r.checks.push_back({"zeta_single_partial", zeta.single_partial_pass,
                      {{"max_abs_joint", exact::number_json(zeta.single_max_abs_joint)},
                       {"max_abs_y", exact::number_json(zeta.single_max_abs_y)}}});
  r.checks.push_back({"zeta_joint_fails", zeta.joint_fails, exact::to_json(zeta.joint)});
  r.checks.push_back({"zeta_closed_form", zeta.closed_form_equal,
                      {{"atoms", zeta.atoms}, {"max_deviation", exact::number_json(zeta.closed_form_max_deviation)}}});

  for (const auto& t : exact::run_all_suites(cfg.seed, trials, families)) {
    json detail{{"trials", t.trials}, {"passed", t.passed}};
    if (!t.all_passed()) {
      detail["first_failing_seed"] = t.first_failing_seed;
      detail["first_failure"] = t.first_failure;
    }
    r.checks.push_back({t.name, t.all_passed(), detail});
  }

  if (cfg.section.contains("scenarios")) {
    const auto& list = cfg.section["scenarios"];
    if (!list.is_array()) throw ConfigError("exact.scenarios must be a list of file names");
    for (const auto& name : list) {
      if (!name.is_string()) throw ConfigError("exact.scenarios must be a list of file names");
      const fs::path file = cfg.resolve(name.get<std::string>());
      std::ifstream in(file);
      if (!in) throw ConfigError("cannot open scenario file '" + file.string() + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError("scenario '" + file.string() + "' is not valid JSON");
      }
      json report = exact::run_scenario(doc);
      const bool pass = report.value("pass", false);
      r.checks.push_back({"scenario:" + name.get<std::string>(), pass, report});
    }
  }
  return r;
}

SuiteResult cmd_simulate(const RunConfig& cfg) {
  require_keys(cfg.section, "simulate", {});
  Simulation sim = simulate_model(cfg);
  SuiteResult r{"simulate", sim.checks, sim.summary};
  json summary = sim.summary;
  json checks = json::array();
  for (const auto& c : sim.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  summary["checks"] = checks;
  fs::create_directories(cfg.out);
  json files = json::object();
  if (sim.driver) {
    write_ensemble_file(cfg.out / "driver.ensemble.csv", *sim.driver, {{"kind", sim.summary["kind"]}});
    files["driver"] = "driver.ensemble.csv";
  }
  if (sim.solution) {
    write_ensemble_file(cfg.out / "solution.ensemble.csv", *sim.solution, summary);
    files["solution"] = "solution.ensemble.csv";
  }
  r.data["files"] = files;
  return r;
}

SuiteResult cmd_diagnose(const RunConfig& cfg) {
  require_keys(cfg.section, "diagnose", {"x", "y", "expect", "structure", "h"});
  const auto x_file = get_required<std::string>(cfg.section, "x", "diagnose");
  const auto y_file = get_required<std::string>(cfg.section, "y", "diagnose");
  const auto expect = get_or<std::string>(cfg.section, "expect", "pass");
  if (expect != "pass" && expect != "reject") throw ConfigError("diagnose.expect must be 'pass' or 'reject'");

  std::vector<diagnostics::StructureEntry> structure;
  const json list = cfg.section.value("structure", json::array({{{"alpha", 0.5}}}));
  if (!list.is_array() || list.empty()) throw ConfigError("diagnose.structure must be a non-empty list");
  for (const auto& e : list) {
    require_keys(e, "diagnose.structure[]", {"label", "alpha", "kind", "eps", "window", "basis"});
    diagnostics::StructureEntry s;
    s.label = get_or<std::string>(e, "label", "");
    s.alpha = get_required<double>(e, "alpha", "diagnose.structure[]");
    const auto kind = get_or<std::string>(e, "kind", "temporal");
    if (kind == "rc") {
      s.kind = diagnostics::StructureEntry::Kind::rc;
      s.eps = get_required<double>(e, "eps", "diagnose.structure[]");
      s.window = get_required<double>(e, "window", "diagnose.structure[]");
      if (e.contains("basis")) s.basis = e["basis"].get<std::vector<std::string>>();
    } else if (kind != "temporal") {
      throw ConfigError("structure kind must be 'temporal' or 'rc'");
    }
    structure.push_back(s);
  }

  const PathEnsemble x = read_ensemble_file(cfg.resolve(x_file));
  const PathEnsemble y = read_ensemble_file(cfg.resolve(y_file));
  auto hs = diagnostics::default_test_functions(y.dims());
  if (cfg.section.contains("h")) {
    // A subset of the default functions: the partial variant.
    const auto ids = cfg.section["h"].get<std::vector<std::string>>();
    std::vector<diagnostics::TestFunction> chosen;
    for (const auto& id : ids) {
      auto it = std::find_if(hs.begin(), hs.end(), [&](const auto& h) { return h.id == id; });
      if (it == hs.end()) throw ConfigError("unknown test function '" + id + "'");
      chosen.push_back(*it);
    }
    hs = chosen;
  }
  try {
    for (const auto& s : structure) {
      if (s.kind == diagnostics::StructureEntry::Kind::rc)
        for (const auto& b : s.basis) diagnostics::basis(b);
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }

  const auto report = diagnostics::compat_test(x, y, structure, hs, cfg.test);
  const bool outcome_ok = (expect == "pass") != report.rejected;
  SuiteResult r{"diagnose", {}, diagnostics::to_json(report)};
  r.data["expect"] = expect;
  r.checks.push_back({"expectation", outcome_ok,
                      {{"expect", expect}, {"rejected", report.rejected}, {"multiplier", report.multiplier}}});
  std::ostringstream csv;
  diagnostics::write_csv(csv, report);
  r.data["csv"] = csv.str();
  return r;
}

SuiteResult cmd_bench(const RunConfig& cfg) {
  require_keys(cfg.section, "bench", {"pair", "ladder", "reference_steps", "expect"});
  const auto pair = get_or<std::string>(cfg.section, "pair", "euler_reference");
  const auto ladder = cfg.section.value("ladder", std::vector<std::size_t>{});
  if (ladder.size() < 3) throw ConfigError("bench ladder needs at least three step counts");
  const auto expect = get_or<std::string>(cfg.section, "expect", "none");
  std::size_t fine_steps = get_or<std::size_t>(cfg.section, "reference_steps", 0);
  std::size_t top = 0;
  for (auto n : ladder) {
    if (n == 0) throw ConfigError("ladder step counts must be positive");
    top = std::max(top, n);
  }
  if (pair == "euler_doubling") top *= 2;
  if (fine_steps == 0) fine_steps = pair == "euler_reference" ? 8 * top : top;
  for (auto n : ladder)
    if (fine_steps % n != 0 || (pair == "euler_doubling" && fine_steps % (2 * n) != 0))
      throw ConfigError("reference_steps must be a multiple of every ladder entry");

  const paths::TimeGrid grid(cfg.horizon, fine_steps);
  diagnostics::ProbeTable table;
  const std::string kind = get_or<std::string>(cfg.model, "kind", "");
  if (pair == "euler_reference" || pair == "euler_doubling") {
    if (kind != "ito") throw ConfigError("Euler ladders need an 'ito' model");
    require_keys(cfg.model, "model", {"kind", "x0", "drift", "sigma"});
    const auto spec = ito_spec(cfg.model);
    const std::vector<double> x0{get_or(cfg.model, "x0", 0.0)};
    auto w = paths::brownian(grid, 1, cfg.paths, cfg.seed);
    w.provenance().spec_hash = cfg.spec_hash;
    auto coarse = diagnostics::euler_ladder(spec, x0);
    diagnostics::LadderSolver other;
    if (pair == "euler_reference")
      other = diagnostics::euler_reference(spec, x0, w);
    else
      other = [coarse](const PathEnsemble& d, std::size_t n) { return coarse(d, 2 * n); };
    table = diagnostics::uniqueness_probe(coarse, other, w, ladder);
  } else if (pair == "tanaka") {
    if (kind != "tanaka") throw ConfigError("the tanaka pair needs a 'tanaka' model");
    auto b = paths::brownian(grid, 1, cfg.paths, cfg.seed);
    auto y = diagnostics::tanaka_driver(b);
    auto copy = [seed = cfg.seed](std::uint32_t index) -> diagnostics::LadderSolver {
      return [seed, index](const PathEnsemble& d, std::size_t n) {
        return diagnostics::solve_with_aux(diagnostics::tanaka_solver(), paths::coarsen(d, n), 1, seed, index);
      };
    };
    table = diagnostics::uniqueness_probe(copy(0), copy(1), y, ladder);
  } else {
    throw ConfigError("unknown bench pair '" + pair + "'");
  }

  SuiteResult r{"bench", {}, diagnostics::to_json(table)};
  r.data["pair"] = pair;
  r.data["reference_steps"] = fine_steps;
  bool ok = true;
  if (expect == "decay")
    ok = !std::isnan(table.order) && table.order >= 0.35 && table.order <= 0.65;
  else if (expect == "zero")
    ok = table.all_zero;
  else if (expect == "plateau")
    ok = !std::isnan(table.order) && std::abs(table.order) < 0.15;
  else if (expect != "none")
    throw ConfigError("bench.expect must be none, decay, zero or plateau");
  r.checks.push_back({"ladder", ok, {{"expect", expect}, {"order", r.data["order"]}}});
  std::ostringstream csv;
  diagnostics::write_csv(csv, table);
  r.data["csv"] = csv.str();
  return r;
}

}  // namespace compatlab::cli
