#include "compatlab/cli/cli.hpp"
#include "compatlab/cli/json_util.hpp"

#include "compatlab/paths/io.hpp"

#include <cstdlib>
#include <fstream>

namespace compatlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (seed == 0) throw ConfigError("seed must be positive");
  if (paths == 0) throw ConfigError("paths must be positive");
  if (steps == 0) throw ConfigError("steps must be positive");
  if (!(horizon > 0)) throw ConfigError("horizon must be positive");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  try {
    test.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("test block: ") + e.what());
  }
}

fs::path RunConfig::resolve(const std::string& file) const {
  fs::path p(file);
  return p.is_absolute() ? p : base_dir / p;
}

RunConfig load_config(const std::string& subcommand, const Overrides& o) {
  RunConfig cfg;
  cfg.subcommand = subcommand;
  cfg.base_dir = fs::current_path();
  json doc = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot open config file '" + o.config + "'");
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    cfg.base_dir = fs::absolute(fs::path(o.config)).parent_path();
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (doc.value("schema", std::string()) != kConfigSchema)
      throw ConfigError(std::string("config schema must be \"") + kConfigSchema + "\"");
  }
  require_keys(doc, "config", {"schema", "seed", "paths", "steps", "horizon", "model", "test", "exact", "simulate",
                               "diagnose", "bench"});
  cfg.seed = get_or(doc, "seed", cfg.seed);
  cfg.paths = get_or(doc, "paths", cfg.paths);
  cfg.steps = get_or(doc, "steps", cfg.steps);
  cfg.horizon = get_or(doc, "horizon", cfg.horizon);
  cfg.model = doc.value("model", json::object());
  if (!cfg.model.is_object()) throw ConfigError("model must be an object");
  cfg.section = doc.value(subcommand, json::object());
  if (!cfg.section.is_object()) throw ConfigError(subcommand + " block must be an object");

  if (o.seed) cfg.seed = *o.seed;
  if (o.paths) cfg.paths = *o.paths;
  if (o.steps) cfg.steps = *o.steps;
  if (!o.format.empty()) cfg.format = o.format;

  const json test = doc.value("test", json::object());
  require_keys(test, "test", {"lambda", "degree", "split", "bootstrap", "multiplier", "features", "seed"});
  cfg.test.lambda = get_or(test, "lambda", cfg.test.lambda);
  cfg.test.degree = get_or(test, "degree", cfg.test.degree);
  cfg.test.split = get_or(test, "split", cfg.test.split);
  cfg.test.bootstrap = get_or(test, "bootstrap", cfg.test.bootstrap);
  cfg.test.multiplier = get_or(test, "multiplier", cfg.test.multiplier);
  cfg.test.feature_count = get_or(test, "features", cfg.test.feature_count);
  cfg.test.seed = get_or(test, "seed", cfg.seed);

  if (!o.out.empty()) {
    cfg.out = o.out;
  } else if (const char* env = std::getenv(kOutDirVariable); env && *env) {
    cfg.out = env;
  } else {
    cfg.out = "compatlab-out";
  }
  cfg.spec_hash = paths::fnv1a_hex(cfg.model.dump());
  cfg.validate();
  return cfg;
}

bool SuiteResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json SuiteResult::to_json(const RunConfig& cfg) const {
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
  return {{"schema", "compatlab.report/1"},
          {"suite", suite},
          {"seed", cfg.seed},
          {"spec_hash", cfg.spec_hash},
          {"pass", pass()},
          {"checks", list},
          {"data", data}};
}

}  // namespace compatlab::cli
