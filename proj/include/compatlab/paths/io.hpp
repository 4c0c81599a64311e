#pragma once

// Ensemble files: one header line "#compatlab-ensemble <json>" followed by CSV
// rows path,step,dim,value. Values are printed with 17 significant digits so
// a read-back ensemble is bit-identical.

#include "compatlab/paths/ensemble.hpp"

#include "json.hpp"

#include <iosfwd>

namespace compatlab::paths {

inline constexpr const char* kEnsembleSchema = "compatlab.ensemble/1";

struct EnsembleFile {
  PathEnsemble ensemble;
  nlohmann::json header;
};

void write_ensemble(std::ostream& out, const PathEnsemble& e, const nlohmann::json& summary = nlohmann::json::object());
/// Throws ConfigError on a malformed file.
EnsembleFile read_ensemble(std::istream& in);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace compatlab::paths
