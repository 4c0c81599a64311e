#pragma once

// Seeded generator of small finite models with a two-step temporal
// structure, used by the property suites.
//
// Y = (y1, y2, y3) has independent coordinates and X = (x1, x2). The structure
// has alpha1 = (sigma(x1), sigma(y1)) and alpha2 = (sigma(x1, x2), sigma(y1, y2))
// with alpha1 < alpha2. Grids are bounded to at most 8 x values and 8 y values.

#include "compatlab/exact/measure.hpp"

#include <cstdint>
#include <random>

namespace compatlab::exact {

enum class KernelKind {
  compatible,    ///< x1 ~ eta(y1), x2 ~ eta(y1, y2, x1): built from past inputs plus independent noise
  anticipating,  ///< x1 ~ eta(y1, y2), x2 ~ eta(y1, y2, y3, x1): reads one step into the future
  arbitrary,     ///< x ~ eta(y) with an unrestricted kernel
};

struct TemporalInputs {
  std::size_t y_sizes[3] = {1, 1, 1};
  std::size_t x_sizes[2] = {1, 1};
  std::vector<Rational> y_probs[3];

  std::vector<Value<Rational>> x_grid() const;
  std::vector<Value<Rational>> y_grid() const;
  Marginal<Rational> nu() const;
};

template <class Num>
CompatStructure<Num> temporal_structure() {
  CompatStructure<Num> c;
  c.add({"alpha1", project_map<Num>({0}), project_map<Num>({0})});
  c.add({"alpha2", project_map<Num>({0, 1}), project_map<Num>({0, 1})});
  c.order(0, 1);
  return c;
}

class ModelGenerator {
 public:
  explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

  TemporalInputs inputs();
  JointMeasure<Rational> solution(const TemporalInputs& in, KernelKind kind, bool strong);
  /// One to three pairwise-distinct compatible laws sharing `in`'s marginal.
  std::vector<JointMeasure<Rational>> family(const TemporalInputs& in);
  /// A random scalar function of Y, as integers in [-3, 3].
  std::vector<Rational> terminal_values(std::size_t count);

  KernelKind any_kind();
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::vector<Rational> random_row(std::size_t size, bool degenerate);
  std::mt19937_64 rng_;
};

template <class Num>
JointMeasure<Num> convert_measure(const JointMeasure<Rational>& mu) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return mu;
  } else {
    auto conv = [](const std::vector<Value<Rational>>& grid) {
      std::vector<Value<Num>> out;
      for (const auto& v : grid) {
        Value<Num> w;
        for (const auto& c : v) w.push_back(c.template convert_to<Num>());
        out.push_back(std::move(w));
      }
      return out;
    };
    std::vector<std::vector<Num>> mass;
    for (const auto& row : mu.mass) {
      std::vector<Num> r;
      for (const auto& m : row) r.push_back(m.template convert_to<Num>());
      mass.push_back(std::move(r));
    }
    return JointMeasure<Num>(conv(mu.x_values), conv(mu.y_values), std::move(mass));
  }
}

}  // namespace compatlab::exact
