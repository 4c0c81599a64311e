#include "compatlab/paths/drivers.hpp"

#include <algorithm>
#include <cmath>

namespace compatlab::paths {

PathEnsemble brownian(const TimeGrid& grid, std::size_t dims, std::size_t paths, std::uint64_t seed,
                      std::size_t first_path, unsigned threads) {
  PathEnsemble w(grid, paths, dims, {seed, {}, "brownian"});
  std::vector<double> sd(grid.steps());
  for (std::size_t k = 0; k < grid.steps(); ++k) sd[k] = std::sqrt(grid.dt(k));
  parallel_for(paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      Stream s(seed, static_cast<std::uint32_t>(first_path + p), purpose::brownian);
      for (std::size_t k = 0; k < grid.steps(); ++k) {
        const double* prev = w.row(p, k);
        double* next = w.row(p, k + 1);
        for (std::size_t j = 0; j < dims; ++j) next[j] = prev[j] + sd[k] * s.normal();
      }
    }
  });
  return w;
}

BrownianOracle::BrownianOracle(std::uint64_t seed, std::uint32_t index, std::uint32_t purpose_tag)
    : knots_{{0.0, 0.0}}, stream_(seed, index, purpose_tag) {}

BrownianOracle::BrownianOracle(const PathEnsemble& ensemble, std::size_t p, std::size_t j)
    : stream_(ensemble.provenance().seed, static_cast<std::uint32_t>(p), purpose::bridge) {
  for (std::size_t k = 0; k < ensemble.points(); ++k) knots_.emplace(ensemble.grid().t(k), ensemble(p, k, j));
}

double BrownianOracle::at(double t) {
  if (!(t >= 0)) throw PreconditionError("Brownian value requested at a negative time");
  auto hi = knots_.lower_bound(t);
  if (hi != knots_.end() && hi->first == t) return hi->second;
  if (hi == knots_.end()) {
    const auto& [a, wa] = *knots_.rbegin();
    double v = wa + std::sqrt(t - a) * stream_.normal();
    knots_.emplace_hint(knots_.end(), t, v);
    return v;
  }
  auto lo = std::prev(hi);
  const double a = lo->first, b = hi->first;
  const double mean = lo->second + (hi->second - lo->second) * (t - a) / (b - a);
  const double var = (b - t) * (t - a) / (b - a);
  double v = mean + std::sqrt(var) * stream_.normal();
  knots_.emplace_hint(hi, t, v);
  return v;
}

std::size_t poisson(Stream& s, double mean) {
  if (!(mean >= 0) || !std::isfinite(mean)) throw PreconditionError("Poisson mean must be finite and nonnegative");
  if (mean == 0) return 0;
  if (mean > 500) throw PreconditionError("Poisson mean too large for inverse transform");
  const double u = s.uniform();
  double p = std::exp(-mean), cdf = p;
  std::size_t k = 0;
  while (u > cdf && p > 0) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

LevyResult levy_driver(const LevySpec& spec, const TimeGrid& grid, std::size_t paths, std::uint64_t seed) {
  if (!(spec.rate >= 0) || !std::isfinite(spec.rate)) throw PreconditionError("jump rate must be nonnegative");
  if (spec.jump_values.size() != spec.jump_probs.size())
    throw PreconditionError("jump law needs one probability per value");
  if (spec.rate > 0 && spec.jump_values.empty()) throw PreconditionError("positive jump rate needs a jump law");
  double total = 0, small_mean = 0;
  for (std::size_t i = 0; i < spec.jump_values.size(); ++i) {
    if (spec.jump_probs[i] < 0) throw PreconditionError("negative jump probability");
    if (std::abs(spec.jump_values[i]) > spec.jump_bound) throw PreconditionError("jump exceeds its declared bound");
    total += spec.jump_probs[i];
    if (std::abs(spec.jump_values[i]) <= 1) small_mean += spec.jump_probs[i] * spec.jump_values[i];
  }
  if (!spec.jump_values.empty() && std::abs(total - 1) > 1e-12) throw PreconditionError("jump law must sum to one");
  const double compensator = spec.rate * small_mean;

  auto w = brownian(grid, 1, paths, seed);
  Provenance prov{seed, {}, "levy"};
  LevyResult out{PathEnsemble(grid, paths, 1, prov),
                 {PathEnsemble(grid, paths, 1, prov), PathEnsemble(grid, paths, 1, prov), {}},
                 std::vector<std::size_t>(paths),
                 std::vector<std::vector<std::size_t>>(paths)};
  out.decomp.tau.assign(paths, std::vector<double>(spec.tau_levels.size(), kNever));

  std::vector<double> small(grid.points()), large(grid.points());
  for (std::size_t p = 0; p < paths; ++p) {
    Stream s(seed, static_cast<std::uint32_t>(p), purpose::jumps);
    const std::size_t count = poisson(s, spec.rate * grid.horizon());
    std::fill(small.begin(), small.end(), 0.0);
    std::fill(large.begin(), large.end(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      const double when = s.uniform() * grid.horizon();
      const double u = s.uniform();
      std::size_t pick = 0;
      double cdf = spec.jump_probs[0];
      while (u > cdf && pick + 1 < spec.jump_values.size()) cdf += spec.jump_probs[++pick];
      const double jump = spec.jump_values[pick];
      const std::size_t step = std::max<std::size_t>(1, grid.ceil_index(when));
      (std::abs(jump) <= 1 ? small : large)[step] += jump;
      out.jump_steps[p].push_back(step);
    }
    std::sort(out.jump_steps[p].begin(), out.jump_steps[p].end());
    out.jump_counts[p] = count;

    double small_sum = 0, large_sum = 0;
    for (std::size_t k = 0; k < grid.points(); ++k) {
      small_sum += small[k];
      large_sum += large[k];
      const double t = grid.t(k);
      const double m = spec.diffusion * w(p, k) + small_sum - compensator * t;
      const double a = spec.drift * t + compensator * t + large_sum;
      out.decomp.M(p, k) = m;
      out.decomp.A(p, k) = a;
      out.V(p, k) = m + a;
      for (std::size_t i = 0; i < spec.tau_levels.size(); ++i)
        if (out.decomp.tau[p][i] == kNever && std::abs(m) >= spec.tau_levels[i]) out.decomp.tau[p][i] = t;
    }
  }
  return out;
}

}  // namespace compatlab::paths
