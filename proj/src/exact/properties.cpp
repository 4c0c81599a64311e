#include "compatlab/exact/properties.hpp"

#include "compatlab/exact/random_models.hpp"
#include "compatlab/exact/theorem.hpp"

#include <functional>

namespace compatlab::exact {

namespace {

using Q = Rational;

// Runs `trial` once per derived seed; a trial returns an empty string on
// success and a description otherwise.
PropertyTally tally(std::string name, std::uint64_t seed, std::size_t trials,
                    const std::function<std::string(ModelGenerator&)>& trial) {
  PropertyTally t{std::move(name), trials, 0, 0, {}};
  for (std::size_t i = 0; i < trials; ++i) {
    const auto s = trial_seed(seed, i);
    ModelGenerator gen(s);
    std::string failure;
    try {
      failure = trial(gen);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (failure.empty()) {
      ++t.passed;
    } else if (t.first_failure.empty()) {
      t.first_failing_seed = s;
      t.first_failure = failure;
    }
  }
  return t;
}

Rv<Q> terminal_rv(const Rv<Q>& y, const std::vector<Value<Q>>& grid, const std::vector<Q>& g) {
  return map_scalar<Q>(y, [&](const Value<Q>& v) {
    auto it = std::find(grid.begin(), grid.end(), v);
    return g.at(static_cast<std::size_t>(it - grid.begin()));
  });
}

StrongMap<Q> random_map(ModelGenerator& gen, const std::vector<Value<Q>>& ys, const std::vector<Value<Q>>& xs) {
  StrongMap<Q> f{ys, {}};
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  for (std::size_t j = 0; j < ys.size(); ++j) f.images.push_back(xs[pick(gen.engine())]);
  return f;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PropertyTally suite_noise_outsourcing(std::uint64_t seed, std::size_t trials) {
  const auto c = temporal_structure<Q>();
  return tally("noise_outsourcing_compatible", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto model = realize(gen.solution(in, KernelKind::compatible, gen.coin()));
    if (!check_compatibility(model.x, model.y, c).pass) return "compatible construction failed the check";
    return {};
  });
}

PropertyTally suite_dual_agreement(std::uint64_t seed, std::size_t trials) {
  const auto c = temporal_structure<Q>();
  return tally("dual_agreement", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto model = realize(gen.solution(in, gen.any_kind(), gen.coin()));
    const bool primal = check_compatibility(model.x, model.y, c).pass;
    const bool dual = check_dual(model.x, model.y, c).pass;
    if (primal != dual) return "primal=" + std::to_string(primal) + " dual=" + std::to_string(dual);
    return {};
  });
}

PropertyTally suite_martingale(std::uint64_t seed, std::size_t trials) {
  const auto c = temporal_structure<Q>();
  return tally("martingale_condition", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto grid = in.y_grid();
    auto model = realize(gen.solution(in, KernelKind::compatible, gen.coin()));
    auto g = terminal_rv(model.y, grid, gen.terminal_values(grid.size()));
    std::vector<Rv<Q>> m;
    for (std::size_t a = 0; a < c.size(); ++a) m.push_back(cond_exp(g, c.y_partition(a, model.y)));
    auto r = check_martingale_condition(m, model.x, model.y, c);
    if (!r.pass) return "deviation " + render_rational(r.alphas.front().max_deviation);
    return {};
  });
}

PropertyTally suite_joint_coupling(std::uint64_t seed, std::size_t trials) {
  const auto c = temporal_structure<Q>();
  return tally("coupling_joint_compatibility", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto mu1 = gen.solution(in, KernelKind::compatible, gen.coin());
    auto mu2 = gen.solution(in, KernelKind::compatible, gen.coin());
    auto cp = canonical_coupling(mu1, mu2);
    if (pair_law(cp.x1, cp.y) != trim(mu1) || pair_law(cp.x2, cp.y) != trim(mu2))
      return "coupling marginals differ from the inputs";
    if (!check_joint_compatibility(cp.x1, cp.x2, cp.y, c).pass) return "joint compatibility failed";
    return {};
  });
}

PropertyTally suite_weak_strong(std::uint64_t seed, std::size_t families) {
  const auto c = temporal_structure<Q>();
  return tally("weak_strong_equivalence", seed, families, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto fam = gen.family(in);
    theorem_gyw_check(fam, c);  // throws VerificationFailure on a != b
    return {};
  });
}

PropertyTally suite_mixture(std::uint64_t seed, std::size_t trials) {
  return tally("strong_mixture", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto nu = in.nu();
    auto xs = in.x_grid();
    auto f1 = random_map(gen, nu.values, xs);
    auto f2 = random_map(gen, nu.values, xs);
    while (f2 == f1) f2 = random_map(gen, nu.values, xs);

    auto k = disintegrate(mix_solutions(f1, f2, nu));
    if (is_strong(k)) return "mixture of distinct strong maps is strong";
    if (!is_strong(disintegrate(mix_solutions(f1, f1, nu)))) return "self-mixture is not strong";
    const Q half(1, 2);
    for (std::size_t j = 0; j < k.y_values.size(); ++j)
      for (std::size_t i = 0; i < k.x_values.size(); ++i) {
        Q expected = (k.x_values[i] == f1.images[j] ? half : Q(0)) + (k.x_values[i] == f2.images[j] ? half : Q(0));
        if (k.rows[j][i] != expected) return "mixture row is not the average of the degenerate rows";
      }
    return {};
  });
}

PropertyTally suite_adapted_equivalence(std::uint64_t seed, std::size_t trials) {
  const auto c = temporal_structure<Q>();
  return tally("adapted_iff_strong_and_compatible", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto mu = gen.solution(in, gen.any_kind(), gen.coin());
    auto model = realize(mu);
    auto flags = check_adapted(model.x, model.y, c);
    const bool adapted = std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
    const bool strong = is_strong(disintegrate(mu)).has_value();
    const bool compatible = check_compatibility(model.x, model.y, c).pass;
    if (adapted != (strong && compatible))
      return "adapted=" + std::to_string(adapted) + " strong=" + std::to_string(strong) +
             " compatible=" + std::to_string(compatible);
    return {};
  });
}

PropertyTally suite_round_trip(std::uint64_t seed, std::size_t trials) {
  return tally("disintegration_round_trip", seed, trials, [&](ModelGenerator& gen) -> std::string {
    auto in = gen.inputs();
    auto mu = gen.solution(in, KernelKind::arbitrary, gen.coin());
    auto nu = mu.y_marginal();
    auto k = disintegrate(mu);
    if (compose(k, nu) != mu) return "compose(disintegrate(mu)) != mu";
    auto table = sampler_from_kernel(k);
    std::vector<std::vector<Q>> pushed(mu.x_values.size(), std::vector<Q>(mu.y_values.size(), Q(0)));
    for (std::size_t r = 0; r < table.y_values.size(); ++r) {
      auto j = static_cast<std::size_t>(std::find(mu.y_values.begin(), mu.y_values.end(), table.y_values[r]) -
                                        mu.y_values.begin());
      for (const auto& cell : table.intervals[r]) pushed[cell.x_index][j] += nu.probs[j] * (cell.hi - cell.lo);
    }
    if (pushed != mu.mass) return "sampler pushforward differs from mu";
    return {};
  });
}

std::vector<PropertyTally> run_all_suites(std::uint64_t seed, std::size_t trials, std::size_t families) {
  return {suite_noise_outsourcing(seed, trials), suite_dual_agreement(seed, trials),
          suite_martingale(seed, trials),        suite_joint_coupling(seed, trials),
          suite_weak_strong(seed, families),     suite_mixture(seed, trials),
          suite_adapted_equivalence(seed, trials), suite_round_trip(seed, trials)};
}

}  // namespace compatlab::exact
