#pragma once

// Driving processes: Brownian ensembles, on-demand Brownian values at
// arbitrary times, and Lévy drivers with their semimartingale decomposition.

#include "compatlab/paths/ensemble.hpp"
#include "compatlab/paths/rng.hpp"

#include <limits>
#include <map>

namespace compatlab::paths {

/// Standard Brownian motion in `dims` dimensions. Path p is generated from
/// Stream(seed, first_path + p, brownian), so a path depends only on the seed
/// and its global index, never on batching or thread count.
PathEnsemble brownian(const TimeGrid& grid, std::size_t dims, std::size_t paths, std::uint64_t seed,
                      std::size_t first_path = 0, unsigned threads = 1);

/// One scalar Brownian path served at arbitrary times. Knots are cached; a
/// query between two knots draws from the exact Brownian-bridge law, and a
/// query past the last knot draws a fresh increment.
class BrownianOracle {
 public:
  /// Fresh path starting from W(0) = 0.
  BrownianOracle(std::uint64_t seed, std::uint32_t index, std::uint32_t purpose_tag);
  /// Path seeded with the stored grid values of `ensemble` (path p, dimension j);
  /// refinements draw from Stream(seed, p, bridge).
  BrownianOracle(const PathEnsemble& ensemble, std::size_t p, std::size_t j = 0);

  double at(double t);
  std::size_t knot_count() const { return knots_.size(); }

 private:
  std::map<double, double> knots_;
  Stream stream_;
};

struct LevySpec {
  double rate = 0;       ///< jump intensity
  std::vector<double> jump_values;
  std::vector<double> jump_probs;
  double jump_bound = 1;  ///< declared bound on |J|
  double drift = 0;
  double diffusion = 0;
  std::vector<double> tau_levels{1, 2, 3};
};

struct SemimartingaleDecomp {
  PathEnsemble M;  ///< diffusion part plus compensated jumps with |J| <= 1
  PathEnsemble A;  ///< drift, compensator and jumps with |J| > 1
  /// tau[p][i] = first grid time with |M| >= tau_levels[i] (infinity if none).
  std::vector<std::vector<double>> tau;
};

struct LevyResult {
  PathEnsemble V;
  SemimartingaleDecomp decomp;
  std::vector<std::size_t> jump_counts;
  /// jump_steps[p]: grid index at which each jump of path p is applied.
  std::vector<std::vector<std::size_t>> jump_steps;
};

/// V = drift t + diffusion W + compound Poisson jumps, with V = M + A exactly.
/// Jumps are applied at the first grid point at or after their time. The
/// Brownian part uses the same streams as brownian(), jumps use Stream(seed, p, jumps).
LevyResult levy_driver(const LevySpec& spec, const TimeGrid& grid, std::size_t paths, std::uint64_t seed);

/// Poisson(mean) sample by inverse transform.
std::size_t poisson(Stream& s, double mean);

constexpr double kNever = std::numeric_limits<double>::infinity();

}  // namespace compatlab::paths
