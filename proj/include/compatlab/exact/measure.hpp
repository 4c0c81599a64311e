#pragma once

// Joint laws on finite grids, their disintegration into a kernel, the
// interval sampler G(y, u) that realises a kernel from one uniform variable,
// and the two-copy coupling built from a pair of samplers.

#include "compatlab/exact/compat.hpp"

#include <optional>

namespace compatlab::exact {

template <class Num>
struct Marginal {
  std::vector<Value<Num>> values;
  std::vector<Num> probs;

  /// Removes zero-probability values.
  Marginal positive_part() const {
    Marginal out;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (probs[i] != 0) {
        out.values.push_back(values[i]);
        out.probs.push_back(probs[i]);
      }
    return out;
  }
  bool operator==(const Marginal&) const = default;
};

/// mass[x][y] on the grid x_values × y_values.
template <class Num>
struct JointMeasure {
  std::vector<Value<Num>> x_values;
  std::vector<Value<Num>> y_values;
  std::vector<std::vector<Num>> mass;

  JointMeasure() = default;
  JointMeasure(std::vector<Value<Num>> xs, std::vector<Value<Num>> ys, std::vector<std::vector<Num>> m)
      : x_values(std::move(xs)), y_values(std::move(ys)), mass(std::move(m)) {
    validate();
  }

  void validate() const {
    if (x_values.empty() || y_values.empty()) throw StructuralError("joint measure needs nonempty grids");
    if (mass.size() != x_values.size()) throw StructuralError("mass table has the wrong number of x rows");
    Num total{0};
    for (const auto& row : mass) {
      if (row.size() != y_values.size()) throw StructuralError("mass table has the wrong number of y columns");
      for (const auto& m : row) {
        if (m < 0) throw StructuralError("negative mass");
        total += m;
      }
    }
    if (!NumTraits<Num>::negligible(total - Num{1}))
      throw StructuralError("joint measure mass sums to " + NumTraits<Num>::render(total));
  }

  Marginal<Num> y_marginal() const {
    Marginal<Num> nu{y_values, std::vector<Num>(y_values.size(), Num{0})};
    for (const auto& row : mass)
      for (std::size_t j = 0; j < row.size(); ++j) nu.probs[j] += row[j];
    return nu;
  }

  bool operator==(const JointMeasure&) const = default;
};

/// rows[y][x] = eta(y, {x}) for every retained y value.
template <class Num>
struct Kernel {
  std::vector<Value<Num>> x_values;
  std::vector<Value<Num>> y_values;
  std::vector<std::vector<Num>> rows;

  void validate() const {
    if (rows.size() != y_values.size()) throw StructuralError("kernel needs one row per y value");
    for (const auto& row : rows) {
      if (row.size() != x_values.size()) throw StructuralError("kernel row has the wrong length");
      Num total{0};
      for (const auto& p : row) {
        if (p < 0) throw StructuralError("negative kernel mass");
        total += p;
      }
      if (!NumTraits<Num>::negligible(total - Num{1})) throw StructuralError("kernel row does not sum to one");
    }
  }
};

template <class Num>
Kernel<Num> disintegrate(const JointMeasure<Num>& mu) {
  mu.validate();
  auto nu = mu.y_marginal();
  Kernel<Num> k{mu.x_values, {}, {}};
  for (std::size_t j = 0; j < mu.y_values.size(); ++j) {
    if (nu.probs[j] == 0) continue;
    std::vector<Num> row(mu.x_values.size());
    for (std::size_t i = 0; i < mu.x_values.size(); ++i) row[i] = mu.mass[i][j] / nu.probs[j];
    k.y_values.push_back(mu.y_values[j]);
    k.rows.push_back(std::move(row));
  }
  return k;
}

/// Reassembles eta(y, dx) nu(dy). Every y of `nu` with positive mass must
/// have a kernel row; y values without a row get zero mass.
template <class Num>
JointMeasure<Num> compose(const Kernel<Num>& k, const Marginal<Num>& nu) {
  JointMeasure<Num> mu;
  mu.x_values = k.x_values;
  mu.y_values = nu.values;
  mu.mass.assign(k.x_values.size(), std::vector<Num>(nu.values.size(), Num{0}));
  for (std::size_t j = 0; j < nu.values.size(); ++j) {
    auto it = std::find(k.y_values.begin(), k.y_values.end(), nu.values[j]);
    if (it == k.y_values.end()) {
      if (nu.probs[j] != 0) throw PreconditionError("kernel has no row for a y value of positive mass");
      continue;
    }
    const auto& row = k.rows[static_cast<std::size_t>(it - k.y_values.begin())];
    for (std::size_t i = 0; i < k.x_values.size(); ++i) mu.mass[i][j] = row[i] * nu.probs[j];
  }
  mu.validate();
  return mu;
}

template <class Num>
struct SamplerInterval {
  Num lo;
  Num hi;
  std::size_t x_index;
};

/// Per y value, consecutive sub-intervals of [0,1] in x-grid order whose
/// lengths are the kernel row masses. Intervals are [lo, hi) except the last,
/// which is closed. Zero-mass x values get no interval.
template <class Num>
struct SamplerTable {
  std::vector<Value<Num>> x_values;
  std::vector<Value<Num>> y_values;
  std::vector<std::vector<SamplerInterval<Num>>> intervals;

  /// G(y, u).
  const Value<Num>& sample(std::size_t y_index, const Num& u) const {
    if (u < 0 || u > 1) throw PreconditionError("sampler argument outside [0,1]");
    const auto& row = intervals.at(y_index);
    for (std::size_t k = 0; k + 1 < row.size(); ++k)
      if (u < row[k].hi) return x_values[row[k].x_index];
    return x_values[row.back().x_index];
  }
};

template <class Num>
SamplerTable<Num> sampler_from_kernel(const Kernel<Num>& k) {
  k.validate();
  SamplerTable<Num> table{k.x_values, k.y_values, {}};
  for (const auto& row : k.rows) {
    std::vector<SamplerInterval<Num>> cells;
    Num left{0};
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0) continue;
      cells.push_back({left, left + row[i], i});
      left += row[i];
    }
    cells.back().hi = Num{1};
    table.intervals.push_back(std::move(cells));
  }
  return table;
}

/// y value -> x value. images[i] is F(y_values[i]).
template <class Num>
struct StrongMap {
  std::vector<Value<Num>> y_values;
  std::vector<Value<Num>> images;
  bool operator==(const StrongMap&) const = default;
};

/// The map F with eta(y, .) = delta_{F(y)} when every row is degenerate.
template <class Num>
std::optional<StrongMap<Num>> is_strong(const Kernel<Num>& k) {
  k.validate();
  StrongMap<Num> f{k.y_values, {}};
  for (const auto& row : k.rows) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (NumTraits<Num>::negligible(row[i])) continue;
      if (hit) return std::nullopt;
      hit = i;
    }
    if (!hit || !NumTraits<Num>::negligible(row[*hit] - Num{1})) return std::nullopt;
    f.images.push_back(k.x_values[*hit]);
  }
  return f;
}

/// Law of (F(Y), Y) for Y ~ nu.
template <class Num>
JointMeasure<Num> graph_measure(const StrongMap<Num>& f, const Marginal<Num>& nu) {
  if (f.y_values != nu.values) throw PreconditionError("strong map and marginal have different y domains");
  std::vector<Value<Num>> xs = f.images;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::vector<Num>> mass(xs.size(), std::vector<Num>(nu.values.size(), Num{0}));
  for (std::size_t j = 0; j < nu.values.size(); ++j) {
    auto i = static_cast<std::size_t>(std::find(xs.begin(), xs.end(), f.images[j]) - xs.begin());
    mass[i][j] += nu.probs[j];
  }
  return JointMeasure<Num>(std::move(xs), nu.values, std::move(mass));
}

/// 1/2 graph(F1) + 1/2 graph(F2) under nu: the law of X = F1(Y) or F2(Y)
/// chosen by an independent fair coin.
template <class Num>
JointMeasure<Num> mix_solutions(const StrongMap<Num>& f1, const StrongMap<Num>& f2, const Marginal<Num>& nu) {
  if (f1.y_values != nu.values || f2.y_values != nu.values)
    throw PreconditionError("strong maps must be defined on exactly the marginal's y values");
  std::vector<Value<Num>> xs = f1.images;
  xs.insert(xs.end(), f2.images.begin(), f2.images.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto index_of = [&](const Value<Num>& v) {
    return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), v) - xs.begin());
  };
  const Num half = Num{1} / Num{2};
  std::vector<std::vector<Num>> mass(xs.size(), std::vector<Num>(nu.values.size(), Num{0}));
  for (std::size_t j = 0; j < nu.values.size(); ++j) {
    mass[index_of(f1.images[j])][j] += half * nu.probs[j];
    mass[index_of(f2.images[j])][j] += half * nu.probs[j];
  }
  return JointMeasure<Num>(std::move(xs), nu.values, std::move(mass));
}

/// A joint measure realised as random variables (X, Y) on the space whose
/// atoms are the positive cells of the mass table.
template <class Num>
struct ModelSpace {
  SpacePtr<Num> space;
  Rv<Num> x;
  Rv<Num> y;
};

template <class Num>
ModelSpace<Num> realize(const JointMeasure<Num>& mu) {
  mu.validate();
  std::vector<std::string> atoms;
  std::vector<Num> weights;
  std::vector<Value<Num>> xs, ys;
  for (std::size_t i = 0; i < mu.x_values.size(); ++i)
    for (std::size_t j = 0; j < mu.y_values.size(); ++j) {
      if (mu.mass[i][j] == 0) continue;
      atoms.push_back("x" + std::to_string(i) + "y" + std::to_string(j));
      weights.push_back(mu.mass[i][j]);
      xs.push_back(mu.x_values[i]);
      ys.push_back(mu.y_values[j]);
    }
  auto space = make_space<Num>(std::move(atoms), std::move(weights));
  return {space, Rv<Num>(space, std::move(xs)), Rv<Num>(space, std::move(ys))};
}

/// (X1, X2, Y) with X1 = G1(Y, xi1), X2 = G2(Y, xi2), xi1, xi2, Y independent.
/// For each y the unit interval is cut at the exact cumulative-mass
/// breakpoints of each kernel row, so atoms are (y, cell of xi1, cell of xi2)
/// and no sampling error is introduced. xi1/xi2 hold the left endpoint of the
/// cell the uniform variable fell in.
template <class Num>
struct Coupling {
  SpacePtr<Num> space;
  Rv<Num> x1;
  Rv<Num> x2;
  Rv<Num> y;
  Rv<Num> xi1;
  Rv<Num> xi2;
};

template <class Num>
Coupling<Num> canonical_coupling(const JointMeasure<Num>& mu1, const JointMeasure<Num>& mu2) {
  auto nu1 = mu1.y_marginal();
  auto nu2 = mu2.y_marginal();
  if (nu1.values != nu2.values) throw PreconditionError("coupled measures must share the y grid");
  for (std::size_t j = 0; j < nu1.probs.size(); ++j)
    if (!NumTraits<Num>::negligible(nu1.probs[j] - nu2.probs[j]))
      throw PreconditionError("coupled measures must share the y marginal");
  auto s1 = sampler_from_kernel(disintegrate(mu1));
  auto s2 = sampler_from_kernel(disintegrate(mu2));
  auto nu = nu1.positive_part();

  std::vector<std::string> atoms;
  std::vector<Num> weights;
  std::vector<Value<Num>> x1, x2, y, u1, u2;
  for (std::size_t j = 0; j < nu.values.size(); ++j) {
    for (std::size_t a = 0; a < s1.intervals[j].size(); ++a) {
      const auto& c1 = s1.intervals[j][a];
      for (std::size_t b = 0; b < s2.intervals[j].size(); ++b) {
        const auto& c2 = s2.intervals[j][b];
        atoms.push_back("y" + std::to_string(j) + "u" + std::to_string(a) + "v" + std::to_string(b));
        weights.push_back(nu.probs[j] * (c1.hi - c1.lo) * (c2.hi - c2.lo));
        x1.push_back(s1.x_values[c1.x_index]);
        x2.push_back(s2.x_values[c2.x_index]);
        y.push_back(nu.values[j]);
        u1.push_back(Value<Num>{c1.lo});
        u2.push_back(Value<Num>{c2.lo});
      }
    }
  }
  auto space = make_space<Num>(std::move(atoms), std::move(weights));
  return {space,
          Rv<Num>(space, std::move(x1)),
          Rv<Num>(space, std::move(x2)),
          Rv<Num>(space, std::move(y)),
          Rv<Num>(space, std::move(u1)),
          Rv<Num>(space, std::move(u2))};
}

/// P(X1 != X2) on a coupling.
template <class Num>
Num disagreement_probability(const Coupling<Num>& c) {
  Num p{0};
  for (std::size_t a = 0; a < c.space->size(); ++a)
    if (c.x1[a] != c.x2[a]) p += c.space->weight(a);
  return p;
}

/// Law of (X1, X2) jointly with Y, read back off a coupling, as the measure
/// of the pair variable; used to confirm the coupling's marginals.
template <class Num>
JointMeasure<Num> pair_law(const Rv<Num>& x, const Rv<Num>& y) {
  auto xs = support(x);
  auto ys = support(y);
  std::vector<std::vector<Num>> mass(xs.size(), std::vector<Num>(ys.size(), Num{0}));
  for (std::size_t a = 0; a < x.size(); ++a) {
    auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x[a]) - xs.begin());
    auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y[a]) - ys.begin());
    mass[i][j] += x.space()->weight(a);
  }
  return JointMeasure<Num>(std::move(xs), std::move(ys), std::move(mass));
}

/// Drops zero-mass rows and columns, so measures that differ only by unused
/// grid points compare equal.
template <class Num>
JointMeasure<Num> trim(const JointMeasure<Num>& mu) {
  std::vector<bool> keep_x(mu.x_values.size(), false), keep_y(mu.y_values.size(), false);
  for (std::size_t i = 0; i < mu.x_values.size(); ++i)
    for (std::size_t j = 0; j < mu.y_values.size(); ++j)
      if (mu.mass[i][j] != 0) keep_x[i] = keep_y[j] = true;
  JointMeasure<Num> out;
  for (std::size_t j = 0; j < mu.y_values.size(); ++j)
    if (keep_y[j]) out.y_values.push_back(mu.y_values[j]);
  for (std::size_t i = 0; i < mu.x_values.size(); ++i) {
    if (!keep_x[i]) continue;
    out.x_values.push_back(mu.x_values[i]);
    std::vector<Num> row;
    for (std::size_t j = 0; j < mu.y_values.size(); ++j)
      if (keep_y[j]) row.push_back(mu.mass[i][j]);
    out.mass.push_back(std::move(row));
  }
  return out;
}

}  // namespace compatlab::exact
