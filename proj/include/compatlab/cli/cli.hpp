#pragma once

// Batch runner behind the `compatlab` executable.
//
// Exit codes: 0 every check passed, 1 some check failed (or a solver
// aborted), 2 usage or configuration error.

#include "compatlab/diagnostics/gap.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace compatlab::cli {

inline constexpr const char* kConfigSchema = "compatlab.config/1";
inline constexpr const char* kOutDirVariable = "COMPATLAB_OUT_DIR";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  std::size_t paths = 1000;
  std::size_t steps = 64;
  double horizon = 1.0;
  nlohmann::json model;    ///< simulate and bench
  nlohmann::json section;  ///< the block named after the subcommand
  diagnostics::TestConfig test;
  std::filesystem::path out;
  std::string format = "json";
  std::filesystem::path base_dir;  ///< relative file references resolve here
  std::string spec_hash;           ///< FNV-1a of the model block

  void validate() const;
  std::filesystem::path resolve(const std::string& file) const;
};

/// Flags given on the command line; unset fields leave the file's values.
struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths, steps;
  std::string out;
  std::string format;
};

/// Reads the config file (if any), applies overrides and the output-directory
/// default. Throws ConfigError on schema violations.
RunConfig load_config(const std::string& subcommand, const Overrides& o);

struct Check {
  std::string name;
  bool pass = true;
  nlohmann::json detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json data;  ///< subcommand-specific payload

  bool pass() const;
  nlohmann::json to_json(const RunConfig& cfg) const;
};

SuiteResult cmd_exact(const RunConfig& cfg);
SuiteResult cmd_simulate(const RunConfig& cfg);
SuiteResult cmd_diagnose(const RunConfig& cfg);
SuiteResult cmd_bench(const RunConfig& cfg);

/// Parses arguments, runs the subcommand, writes <out>/<subcommand>.json and
/// .csv, prints the report in the requested format and returns the exit code.
/// Wall time goes to `err` so that `out` and the files stay reproducible.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compatlab::cli
