#pragma once

// Finite probability spaces, random variables on them, and sigma-algebras
// represented as partitions of the atom set. Every sigma-algebra on a finite
// space is generated by a partition, so completions and null-set subtleties
// never arise once zero-weight atoms are pruned.

#include "compatlab/error.hpp"
#include "compatlab/exact/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace compatlab::exact {

template <class Num>
using Value = std::vector<Num>;

template <class Num>
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> atoms, std::vector<Num> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.size() != weights_.size())
      throw StructuralError("atom and weight lists differ in length");
    if (atoms_.empty()) throw StructuralError("a finite space needs at least one atom");
    std::vector<std::string> sorted = atoms_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("atom identifiers must be distinct");
    Num total{0};
    for (const auto& w : weights_) {
      if (w < 0) throw StructuralError("negative atom weight");
      total += w;
    }
    if (!NumTraits<Num>::negligible(total - Num{1}))
      throw StructuralError("atom weights must sum to one, got " + NumTraits<Num>::render(total));
  }

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<Num>& weights() const { return weights_; }
  const Num& weight(std::size_t i) const { return weights_[i]; }

  bool has_null_atoms() const {
    return std::any_of(weights_.begin(), weights_.end(), [](const Num& w) { return w == 0; });
  }

 private:
  std::vector<std::string> atoms_;
  std::vector<Num> weights_;
};

template <class Num>
using SpacePtr = std::shared_ptr<const FiniteSpace<Num>>;

template <class Num>
SpacePtr<Num> make_space(std::vector<std::string> atoms, std::vector<Num> weights) {
  return std::make_shared<const FiniteSpace<Num>>(std::move(atoms), std::move(weights));
}

/// Random variable: one value tuple per atom, all of the same arity.
template <class Num>
class Rv {
 public:
  Rv(SpacePtr<Num> space, std::vector<Value<Num>> values) : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw StructuralError("random variable without a space");
    if (values_.size() != space_->size())
      throw StructuralError("random variable needs exactly one value per atom");
    arity_ = values_.front().size();
    for (const auto& v : values_)
      if (v.size() != arity_) throw StructuralError("random variable values have inconsistent arity");
  }

  static Rv scalar(SpacePtr<Num> space, const std::vector<Num>& values) {
    std::vector<Value<Num>> wrapped;
    wrapped.reserve(values.size());
    for (const auto& v : values) wrapped.push_back(Value<Num>{v});
    return Rv(std::move(space), std::move(wrapped));
  }

  const SpacePtr<Num>& space() const { return space_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return values_.size(); }
  const Value<Num>& operator[](std::size_t atom) const { return values_[atom]; }
  const std::vector<Value<Num>>& values() const { return values_; }

  /// Scalar value of an arity-1 variable.
  const Num& scalar_at(std::size_t atom) const {
    if (arity_ != 1) throw StructuralError("scalar access on a vector-valued random variable");
    return values_[atom][0];
  }

 private:
  SpacePtr<Num> space_;
  std::vector<Value<Num>> values_;
  std::size_t arity_ = 0;
};

/// Partition of the atoms into disjoint nonempty blocks. Blocks are labelled
/// 0..k-1 in order of their first atom, so equal partitions compare equal.
template <class Num>
class Partition {
 public:
  Partition(SpacePtr<Num> space, std::vector<std::size_t> labels) : space_(std::move(space)) {
    if (!space_) throw StructuralError("partition without a space");
    if (labels.size() != space_->size()) throw StructuralError("partition label count does not match the space");
    std::map<std::size_t, std::size_t> relabel;
    labels_.reserve(labels.size());
    for (auto l : labels) {
      auto [it, fresh] = relabel.emplace(l, relabel.size());
      labels_.push_back(it->second);
    }
    block_count_ = relabel.size();
  }

  const SpacePtr<Num>& space() const { return space_; }
  std::size_t block_count() const { return block_count_; }
  std::size_t block_of(std::size_t atom) const { return labels_[atom]; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(block_count_);
    for (std::size_t a = 0; a < labels_.size(); ++a) out[labels_[a]].push_back(a);
    return out;
  }

  /// True when every block of `finer` lies inside a single block of *this.
  bool coarser_than(const Partition& finer) const {
    if (space_ != finer.space_) throw StructuralError("partitions live on different spaces");
    std::vector<std::size_t> image(finer.block_count_, static_cast<std::size_t>(-1));
    for (std::size_t a = 0; a < labels_.size(); ++a) {
      auto& slot = image[finer.labels_[a]];
      if (slot == static_cast<std::size_t>(-1))
        slot = labels_[a];
      else if (slot != labels_[a])
        return false;
    }
    return true;
  }

  bool operator==(const Partition& other) const {
    return space_ == other.space_ && labels_ == other.labels_;
  }

 private:
  SpacePtr<Num> space_;
  std::vector<std::size_t> labels_;
  std::size_t block_count_ = 0;
};

template <class Num>
Partition<Num> trivial_partition(const SpacePtr<Num>& space) {
  return Partition<Num>(space, std::vector<std::size_t>(space->size(), 0));
}

template <class Num>
Partition<Num> discrete_partition(const SpacePtr<Num>& space) {
  std::vector<std::size_t> labels(space->size());
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return Partition<Num>(space, std::move(labels));
}

/// Level sets of the tuple map atom -> (rv_1(atom), ..., rv_k(atom)).
template <class Num>
Partition<Num> sigma_of(const std::vector<Rv<Num>>& rvs) {
  if (rvs.empty()) throw PreconditionError("sigma_of needs at least one random variable");
  const auto& space = rvs.front().space();
  for (const auto& rv : rvs)
    if (rv.space() != space) throw StructuralError("random variables live on different spaces");
  std::map<std::vector<Value<Num>>, std::size_t> level;
  std::vector<std::size_t> labels;
  labels.reserve(space->size());
  for (std::size_t a = 0; a < space->size(); ++a) {
    std::vector<Value<Num>> key;
    key.reserve(rvs.size());
    for (const auto& rv : rvs) key.push_back(rv[a]);
    auto [it, fresh] = level.emplace(std::move(key), level.size());
    labels.push_back(it->second);
  }
  return Partition<Num>(space, std::move(labels));
}

template <class Num>
Partition<Num> sigma_of(const Rv<Num>& rv) {
  return sigma_of(std::vector<Rv<Num>>{rv});
}

/// Common refinement: the coarsest partition finer than both.
template <class Num>
Partition<Num> join(const Partition<Num>& p, const Partition<Num>& q) {
  if (p.space() != q.space()) throw StructuralError("cannot join partitions of different spaces");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cell;
  std::vector<std::size_t> labels;
  labels.reserve(p.labels().size());
  for (std::size_t a = 0; a < p.labels().size(); ++a) {
    auto [it, fresh] = cell.emplace(std::make_pair(p.block_of(a), q.block_of(a)), cell.size());
    labels.push_back(it->second);
  }
  return Partition<Num>(p.space(), std::move(labels));
}

/// E[h | sigma(p)]: block-wise weighted average of a scalar variable.
template <class Num>
Rv<Num> cond_exp(const Rv<Num>& h, const Partition<Num>& p) {
  if (h.space() != p.space()) throw StructuralError("conditioning across different spaces");
  if (h.arity() != 1) throw PreconditionError("cond_exp needs a real-valued random variable");
  const auto& space = *h.space();
  std::vector<Num> mass(p.block_count(), Num{0});
  std::vector<Num> moment(p.block_count(), Num{0});
  for (std::size_t a = 0; a < space.size(); ++a) {
    mass[p.block_of(a)] += space.weight(a);
    moment[p.block_of(a)] += space.weight(a) * h.scalar_at(a);
  }
  for (std::size_t b = 0; b < mass.size(); ++b) {
    if (mass[b] == 0) throw StructuralError("conditioning on a zero-probability block; prune null atoms first");
    moment[b] /= mass[b];
  }
  std::vector<Num> out(space.size());
  for (std::size_t a = 0; a < space.size(); ++a) out[a] = moment[p.block_of(a)];
  return Rv<Num>::scalar(h.space(), out);
}

template <class Num>
Num expectation(const Rv<Num>& h) {
  Num acc{0};
  for (std::size_t a = 0; a < h.size(); ++a) acc += h.space()->weight(a) * h.scalar_at(a);
  return acc;
}

/// max over atoms of |a - b| for scalar variables on the same space.
template <class Num>
Num max_abs_difference(const Rv<Num>& a, const Rv<Num>& b) {
  if (a.space() != b.space()) throw StructuralError("comparing variables on different spaces");
  Num worst{0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    Num d = NumTraits<Num>::abs(Num(a.scalar_at(i) - b.scalar_at(i)));
    if (d > worst) worst = d;
  }
  return worst;
}

/// Pointwise image of a random variable under a value map.
template <class Num>
Rv<Num> map_rv(const Rv<Num>& rv, const std::function<Value<Num>(const Value<Num>&)>& f) {
  std::vector<Value<Num>> out;
  out.reserve(rv.size());
  for (const auto& v : rv.values()) out.push_back(f(v));
  return Rv<Num>(rv.space(), std::move(out));
}

template <class Num>
Rv<Num> map_scalar(const Rv<Num>& rv, const std::function<Num(const Value<Num>&)>& f) {
  std::vector<Num> out;
  out.reserve(rv.size());
  for (const auto& v : rv.values()) out.push_back(f(v));
  return Rv<Num>::scalar(rv.space(), out);
}

/// Indicator of a partition block, as a scalar variable.
template <class Num>
Rv<Num> block_indicator(const Partition<Num>& p, std::size_t block) {
  std::vector<Num> out(p.space()->size(), Num{0});
  for (std::size_t a = 0; a < out.size(); ++a)
    if (p.block_of(a) == block) out[a] = Num{1};
  return Rv<Num>::scalar(p.space(), out);
}

/// Distinct values taken by `rv`, in increasing order.
template <class Num>
std::vector<Value<Num>> support(const Rv<Num>& rv) {
  std::vector<Value<Num>> vals = rv.values();
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

/// Drops zero-weight atoms. Returns the new space and, for each retained atom,
/// its index in the original space.
template <class Num>
std::pair<SpacePtr<Num>, std::vector<std::size_t>> prune(const FiniteSpace<Num>& space) {
  std::vector<std::string> atoms;
  std::vector<Num> weights;
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < space.size(); ++a) {
    if (space.weight(a) == 0) continue;
    atoms.push_back(space.atoms()[a]);
    weights.push_back(space.weight(a));
    kept.push_back(a);
  }
  return {make_space<Num>(std::move(atoms), std::move(weights)), std::move(kept)};
}

/// Restriction of a variable to a pruned space produced by `prune`.
template <class Num>
Rv<Num> restrict_to(const Rv<Num>& rv, const SpacePtr<Num>& pruned, const std::vector<std::size_t>& kept) {
  std::vector<Value<Num>> vals;
  vals.reserve(kept.size());
  for (auto a : kept) vals.push_back(rv[a]);
  return Rv<Num>(pruned, std::move(vals));
}

}  // namespace compatlab::exact
