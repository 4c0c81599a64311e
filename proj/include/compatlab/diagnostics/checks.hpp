#pragma once

// Statistical checks on simulated ensembles: compatibility gaps over a
// structure, martingale increments, strong-solution copies and uniqueness
// ladders.

#include "compatlab/diagnostics/gap.hpp"
#include "compatlab/paths/rng.hpp"

#include "json.hpp"

#include <functional>
#include <iosfwd>

namespace compatlab::diagnostics {

/// One index of a compatibility structure: features of X and Y at time alpha.
/// Temporal features read both paths up to alpha. RC features integrate basis
/// functions over backward windows of X and forward windows of Y.
struct StructureEntry {
  enum class Kind { temporal, rc };
  std::string label;
  double alpha = 0;
  Kind kind = Kind::temporal;
  double eps = 0;
  double window = 0;
  std::vector<std::string> basis{"id"};
};

/// A bounded test function of the driver path, evaluated relative to alpha.
struct TestFunction {
  std::string id;
  std::function<double(const paths::PathView& y, const paths::TimeGrid& grid, double alpha)> h;
};

/// Sign and clip(., -1, 1) of the increments Y(T) - Y(alpha) and
/// Y((alpha + T) / 2) - Y(alpha), per driver dimension.
std::vector<TestFunction> default_test_functions(std::size_t dims);

struct GapReport {
  std::vector<GapEntry> entries;
  double multiplier = 0;
  bool rejected = false;
  paths::Provenance x_provenance, y_provenance;
};

/// l2_gap for every (alpha, h) with a Bonferroni-adjusted multiplier. Throws
/// ProvenanceError unless X and Y share grid, path count, seed and spec hash.
GapReport compat_test(const paths::PathEnsemble& x, const paths::PathEnsemble& y,
                      const std::vector<StructureEntry>& structure, const std::vector<TestFunction>& hs,
                      const TestConfig& cfg);

struct MartingaleReport {
  double s = 0, t = 0;
  double mse_null = 0;  ///< mean square of the increment (the martingale prediction is 0)
  double mse_fit = 0;   ///< after regressing on features of (X, Y) at s
  double gain = 0;
  double se = 0;
  bool reject = false;
  bool degenerate = false;
};

/// Regresses M(t) - M(s) on polynomial features of (X, Y) at s and rejects when
/// the gain over the zero predictor exceeds cfg.multiplier standard errors.
/// With `stop` (one time per path), M is read at min(t, stop) and min(s, stop).
MartingaleReport martingale_test(const paths::PathEnsemble& m, const paths::PathEnsemble& x,
                                 const paths::PathEnsemble& y, double s, double t, const TestConfig& cfg,
                                 const std::vector<double>* stop = nullptr);

/// Writes path p of a solution driven by `driver` into out[points * dims],
/// drawing any extra randomness from `aux`.
using AuxSolver =
    std::function<void(const paths::PathEnsemble& driver, std::size_t p, paths::Stream& aux, double* out)>;

struct StrongCopyReport {
  std::size_t paths = 0;
  double statistic = 0;  ///< mean over paths of sup_k |X - X'|
  double se = 0;
  double disagreement = 0;  ///< fraction of paths with X != X'
  double conditional = 0;   ///< mean of sup_k |X - X'| over the disagreeing paths
  double conditional_se = 0;
};

/// Solves twice per driver path, with Stream(seed, p, aux(0)) and
/// Stream(seed, p, aux(1)).
StrongCopyReport strong_copy_test(const AuxSolver& solver, const paths::PathEnsemble& driver, std::size_t dims,
                                  std::uint64_t seed);

/// Solution computed from a shared driver at a given step count.
using LadderSolver = std::function<paths::PathEnsemble(const paths::PathEnsemble& driver, std::size_t steps)>;

struct ProbeRow {
  std::size_t steps = 0;
  double error = 0;  ///< mean over paths of sup |X_A - X_B| on the coarser grid
  double se = 0;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  /// Minus the least-squares slope of log error against log steps; NaN when
  /// some error is zero.
  double order = 0;
  bool all_zero = false;
};

ProbeTable uniqueness_probe(const LadderSolver& a, const LadderSolver& b, const paths::PathEnsemble& driver,
                            const std::vector<std::size_t>& ladder);

/// Columns: alpha,h_id,mse_y,mse_xy,gap,se,ci_lo,ci_hi,decision
void write_csv(std::ostream& out, const GapReport& r);
nlohmann::json to_json(const GapReport& r);
/// Columns: steps,error,se
void write_csv(std::ostream& out, const ProbeTable& t);
nlohmann::json to_json(const ProbeTable& t);
nlohmann::json to_json(const MartingaleReport& r);
nlohmann::json to_json(const StrongCopyReport& r);

}  // namespace compatlab::diagnostics
