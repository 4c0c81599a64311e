#pragma once

// Randomized property suites over generated finite models. Each suite draws
// `trials` models from per-trial seeds derived from `seed`, so a failing trial
// can be replayed on its own.

#include <cstdint>
#include <string>
#include <vector>

namespace compatlab::exact {

struct PropertyTally {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::uint64_t first_failing_seed = 0;
  std::string first_failure;

  bool all_passed() const { return trials > 0 && passed == trials; }
};

/// Seed of trial `index` under base `seed` (splitmix64 finalizer).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

/// X built from past inputs plus independent noise passes check_compatibility.
PropertyTally suite_noise_outsourcing(std::uint64_t seed, std::size_t trials);
/// check_dual and check_compatibility agree on models of every kernel kind.
PropertyTally suite_dual_agreement(std::uint64_t seed, std::size_t trials);
/// Compatible models satisfy the martingale condition for M(a) = E[g(Y) | F^Y_a].
PropertyTally suite_martingale(std::uint64_t seed, std::size_t trials);
/// Canonical couplings of two compatible laws are jointly compatible, with the
/// coupling's (X_i, Y) marginals equal to the inputs.
PropertyTally suite_joint_coupling(std::uint64_t seed, std::size_t trials);
/// theorem_gyw_check finds a == b on generated families.
PropertyTally suite_weak_strong(std::uint64_t seed, std::size_t families);
/// Coin mixtures of two distinct strong maps are not strong and disintegrate
/// to the average of the two degenerate rows.
PropertyTally suite_mixture(std::uint64_t seed, std::size_t trials);
/// adapted at every alpha <=> strong and compatible.
PropertyTally suite_adapted_equivalence(std::uint64_t seed, std::size_t trials);
/// disintegrate/compose and the sampler pushforward reproduce the mass table.
PropertyTally suite_round_trip(std::uint64_t seed, std::size_t trials);

std::vector<PropertyTally> run_all_suites(std::uint64_t seed, std::size_t trials, std::size_t families);

}  // namespace compatlab::exact
