#include "compatlab/cli/cli.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace compatlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string checks_csv(const SuiteResult& r) {
  std::ostringstream out;
  out << "name,status\n";
  for (const auto& c : r.checks) out << c.name << ',' << (c.pass ? "pass" : "fail") << '\n';
  return out.str();
}

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out || !(out << text)) throw ConfigError("cannot write '" + file.string() + "'");
}

SuiteResult dispatch(const RunConfig& cfg) {
  if (cfg.subcommand == "exact") return cmd_exact(cfg);
  if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
  if (cfg.subcommand == "diagnose") return cmd_diagnose(cfg);
  return cmd_bench(cfg);
}

int execute(const std::string& sub, const Overrides& o, std::ostream& out) {
  const RunConfig cfg = load_config(sub, o);
  SuiteResult r = dispatch(cfg);

  std::string csv = checks_csv(r);
  if (r.data.is_object() && r.data.contains("csv")) {
    csv = r.data["csv"].get<std::string>();
    r.data.erase("csv");
  }
  const std::string report = r.to_json(cfg).dump(2) + "\n";
  fs::create_directories(cfg.out);
  write_file(cfg.out / (sub + ".json"), report);
  write_file(cfg.out / (sub + ".csv"), csv);
  out << (cfg.format == "csv" ? csv : report);
  return r.pass() ? kPass : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compatibility checks for stochastic equations", "compatlab"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  std::size_t paths = 0, steps = 0;
  for (const char* name : {"exact", "simulate", "diagnose", "bench"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed")->check(CLI::PositiveNumber);
    sub->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
    sub->add_option("--steps", steps, "grid steps")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  }
  app.get_subcommand("exact")->description("exact finite-space checks and scenario files");
  app.get_subcommand("simulate")->description("simulate a model and write its ensembles");
  app.get_subcommand("diagnose")->description("L2-gap compatibility test on two ensembles");
  app.get_subcommand("bench")->description("pathwise uniqueness ladder");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage, msg;
    const int code = app.exit(e, usage, msg);
    out << usage.str();
    err << msg.str();
    return code == 0 ? kPass : kUsage;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  const auto* s = app.get_subcommand(sub);
  if (s->count("--seed")) o.seed = seed;
  if (s->count("--paths")) o.paths = paths;
  if (s->count("--steps")) o.steps = steps;

  const auto start = std::chrono::steady_clock::now();
  int code = kUsage;
  try {
    code = execute(sub, o, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const ProvenanceError& e) {
    err << "provenance error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << '\n';
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << '\n';
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    code = kCheckFailed;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    code = kCheckFailed;
  } catch (const VerificationFailure& e) {
    err << "verification failure: " << e.what() << '\n';
    code = kCheckFailed;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  err << "compatlab " << sub << ": exit " << code << ", wall " << wall.count() << " s\n";
  return code;
}

}  // namespace compatlab::cli
