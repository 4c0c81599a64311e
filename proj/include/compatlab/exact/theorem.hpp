#pragma once

#include "compatlab/exact/measure.hpp"

namespace compatlab::exact {

template <class Num>
struct GywResult {
  bool a_holds = false;  ///< nonempty and pointwise uniqueness over canonical couplings
  bool b_holds = false;  ///< a strong solution exists and the family has one law
  /// disagreement[i][j] = P(X1 != X2) for the canonical coupling of (mu_i, mu_j).
  std::vector<std::vector<Num>> disagreement;
};

/// Evaluates both sides of the weak/strong equivalence on an explicit finite
/// family of solution laws. Every law must be C-compatible and all must share
/// the same input marginal. Throws VerificationFailure if the two sides differ.
template <class Num>
GywResult<Num> theorem_gyw_check(const std::vector<JointMeasure<Num>>& measures, const CompatStructure<Num>& c) {
  GywResult<Num> out;
  if (measures.empty()) return out;

  const auto nu = measures.front().y_marginal();
  for (const auto& mu : measures) {
    auto other = mu.y_marginal();
    if (other.values != nu.values) throw PreconditionError("solution laws must share the y grid");
    for (std::size_t j = 0; j < nu.probs.size(); ++j)
      if (!NumTraits<Num>::negligible(other.probs[j] - nu.probs[j]))
        throw PreconditionError("solution laws must share the input marginal");
    auto model = realize(mu);
    if (!check_compatibility(model.x, model.y, c).pass)
      throw PreconditionError("solution law is not compatible with the declared structure");
  }

  const std::size_t n = measures.size();
  out.disagreement.assign(n, std::vector<Num>(n, Num{0}));
  bool pointwise = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.disagreement[i][j] = disagreement_probability(canonical_coupling(measures[i], measures[j]));
      if (!NumTraits<Num>::negligible(out.disagreement[i][j])) pointwise = false;
    }
  out.a_holds = pointwise;
  out.b_holds = n == 1 && is_strong(disintegrate(measures.front())).has_value();
  if (out.a_holds != out.b_holds)
    throw VerificationFailure("weak/strong equivalence violated: a=" + std::to_string(out.a_holds) +
                              " b=" + std::to_string(out.b_holds));
  return out;
}

}  // namespace compatlab::exact
