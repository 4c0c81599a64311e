#pragma once

// Compatibility structures and the exact checks built on them.
//
// A structure is a finite list of indices alpha, each carrying a value map
// for the X side and one for the Y side. The sigma-algebra F_alpha^X is the
// one generated by x_map(X); likewise for Y. Because the rules only ever see
// values, they are deterministic functions of the variable they are applied to.

#include "compatlab/exact/space.hpp"

#include <optional>
#include <set>

namespace compatlab::exact {

template <class Num>
using ValueMap = std::function<Value<Num>(const Value<Num>&)>;

template <class Num>
struct TestFunction {
  std::string name;
  std::function<Num(const Value<Num>&)> eval;
};

template <class Num>
struct AlphaRule {
  std::string name;
  ValueMap<Num> x_map;
  ValueMap<Num> y_map;
};

template <class Num>
ValueMap<Num> identity_map() {
  return [](const Value<Num>& v) { return v; };
}

template <class Num>
ValueMap<Num> trivial_map() {
  return [](const Value<Num>&) { return Value<Num>{}; };
}

/// sigma of the listed coordinates.
template <class Num>
ValueMap<Num> project_map(std::vector<std::size_t> coords) {
  return [coords = std::move(coords)](const Value<Num>& v) {
    Value<Num> out;
    out.reserve(coords.size());
    for (auto c : coords) {
      if (c >= v.size()) throw StructuralError("projection coordinate out of range");
      out.push_back(v[c]);
    }
    return out;
  };
}

template <class Num>
TestFunction<Num> component_test(std::size_t coord, std::string name = {}) {
  if (name.empty()) name = "y[" + std::to_string(coord) + "]";
  return {std::move(name), [coord](const Value<Num>& v) {
            if (coord >= v.size()) throw StructuralError("test function coordinate out of range");
            return v[coord];
          }};
}

template <class Num>
TestFunction<Num> indicator_test(Value<Num> target, std::string name = {}) {
  if (name.empty()) {
    name = "1{y=(";
    for (std::size_t i = 0; i < target.size(); ++i)
      name += (i ? "," : "") + NumTraits<Num>::render(target[i]);
    name += ")}";
  }
  return {std::move(name), [target = std::move(target)](const Value<Num>& v) {
            return v == target ? Num{1} : Num{0};
          }};
}

template <class Num>
class CompatStructure {
 public:
  CompatStructure() = default;
  explicit CompatStructure(std::vector<AlphaRule<Num>> alphas) : alphas_(std::move(alphas)) {}

  CompatStructure& add(AlphaRule<Num> rule) {
    alphas_.push_back(std::move(rule));
    return *this;
  }
  /// Declares alphas[before] < alphas[after] in the partial order.
  CompatStructure& order(std::size_t before, std::size_t after) {
    if (before >= alphas_.size() || after >= alphas_.size())
      throw PreconditionError("order relation refers to an unknown alpha");
    order_.emplace_back(before, after);
    return *this;
  }
  /// Restricts checks to a partial test-function set H.
  CompatStructure& partial(std::vector<TestFunction<Num>> h) {
    h_set_ = std::move(h);
    return *this;
  }

  const std::vector<AlphaRule<Num>>& alphas() const { return alphas_; }
  std::size_t size() const { return alphas_.size(); }
  const std::optional<std::vector<TestFunction<Num>>>& h_set() const { return h_set_; }
  bool has_order() const { return !order_.empty(); }

  /// Transitive closure of the declared relations, as (before, after) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs() const {
    std::set<std::pair<std::size_t, std::size_t>> closure(order_.begin(), order_.end());
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto [a, b] : std::vector(closure.begin(), closure.end()))
        for (auto [c, d] : std::vector(closure.begin(), closure.end()))
          if (b == c && closure.emplace(a, d).second) grew = true;
    }
    return {closure.begin(), closure.end()};
  }

  Partition<Num> x_partition(std::size_t alpha, const Rv<Num>& x) const {
    return sigma_of(map_rv(x, alphas_.at(alpha).x_map));
  }
  Partition<Num> y_partition(std::size_t alpha, const Rv<Num>& y) const {
    return sigma_of(map_rv(y, alphas_.at(alpha).y_map));
  }

  /// Both partition families are monotone along every declared relation.
  bool is_filtration(const Rv<Num>& x, const Rv<Num>& y) const {
    for (auto [a, b] : ordered_pairs()) {
      if (!x_partition(a, x).coarser_than(x_partition(b, x))) return false;
      if (!y_partition(a, y).coarser_than(y_partition(b, y))) return false;
    }
    return true;
  }

 private:
  std::vector<AlphaRule<Num>> alphas_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
  std::optional<std::vector<TestFunction<Num>>> h_set_;
};

template <class Num>
struct AlphaDeviation {
  std::string alpha;
  Num max_deviation{0};
  std::vector<std::pair<std::string, Num>> per_test;  // (test-function name, deviation)
  bool pass = true;
};

template <class Num>
struct CheckReport {
  std::string kind;
  std::vector<AlphaDeviation<Num>> alphas;
  bool pass = true;
};

namespace detail {

template <class Num>
void require_same_space(const Rv<Num>& a, const Rv<Num>& b) {
  if (a.space() != b.space()) throw StructuralError("random variables live on different spaces");
}

template <class Num>
void require_alphas(const CompatStructure<Num>& c) {
  if (c.size() == 0) throw PreconditionError("compatibility structure has an empty alpha list");
}

template <class Num>
std::vector<TestFunction<Num>> test_functions(const CompatStructure<Num>& c, const Rv<Num>& y) {
  if (c.h_set()) return *c.h_set();
  std::vector<TestFunction<Num>> out;
  for (auto& v : support(y)) out.push_back(indicator_test<Num>(v));
  return out;
}

template <class Num>
CheckReport<Num> compare_conditionings(const std::string& kind, const Rv<Num>& y, const CompatStructure<Num>& c,
                                       const std::function<Partition<Num>(std::size_t)>& enlarged) {
  CheckReport<Num> report{kind, {}, true};
  auto tests = test_functions(c, y);
  for (std::size_t a = 0; a < c.size(); ++a) {
    AlphaDeviation<Num> dev{c.alphas()[a].name, Num{0}, {}, true};
    auto fy = c.y_partition(a, y);
    auto big = join(enlarged(a), fy);
    for (const auto& h : tests) {
      auto hv = map_scalar(y, h.eval);
      Num d = max_abs_difference(cond_exp(hv, big), cond_exp(hv, fy));
      dev.per_test.emplace_back(h.name, d);
      if (d > dev.max_deviation) dev.max_deviation = d;
    }
    dev.pass = NumTraits<Num>::negligible(dev.max_deviation);
    report.pass = report.pass && dev.pass;
    report.alphas.push_back(std::move(dev));
  }
  return report;
}

}  // namespace detail

/// E[h(Y) | F^X_a v F^Y_a] == E[h(Y) | F^Y_a] for every alpha and every h in
/// the structure's H set (default: indicators of Y's values, which span all
/// bounded functions of a finitely-valued Y).
template <class Num>
CheckReport<Num> check_compatibility(const Rv<Num>& x, const Rv<Num>& y, const CompatStructure<Num>& c) {
  detail::require_same_space(x, y);
  detail::require_alphas(c);
  return detail::compare_conditionings<Num>("compatibility", y, c,
                                            [&](std::size_t a) { return c.x_partition(a, x); });
}

/// Joint version: conditioning on F^{X1}_a v F^{X2}_a v F^Y_a.
template <class Num>
CheckReport<Num> check_joint_compatibility(const Rv<Num>& x1, const Rv<Num>& x2, const Rv<Num>& y,
                                           const CompatStructure<Num>& c) {
  detail::require_same_space(x1, y);
  detail::require_same_space(x2, y);
  detail::require_alphas(c);
  return detail::compare_conditionings<Num>(
      "joint_compatibility", y, c, [&](std::size_t a) { return join(c.x_partition(a, x1), c.x_partition(a, x2)); });
}

/// Dual characterisation: E[g(X) | sigma(Y)] == E[g(X) | F^Y_a] for g ranging
/// over indicators of the blocks of F^X_a.
template <class Num>
CheckReport<Num> check_dual(const Rv<Num>& x, const Rv<Num>& y, const CompatStructure<Num>& c) {
  detail::require_same_space(x, y);
  detail::require_alphas(c);
  CheckReport<Num> report{"dual", {}, true};
  auto full_y = sigma_of(y);
  for (std::size_t a = 0; a < c.size(); ++a) {
    AlphaDeviation<Num> dev{c.alphas()[a].name, Num{0}, {}, true};
    auto fx = c.x_partition(a, x);
    auto fy = c.y_partition(a, y);
    for (std::size_t b = 0; b < fx.block_count(); ++b) {
      auto g = block_indicator(fx, b);
      Num d = max_abs_difference(cond_exp(g, full_y), cond_exp(g, fy));
      dev.per_test.emplace_back("1{F^X block " + std::to_string(b) + "}", d);
      if (d > dev.max_deviation) dev.max_deviation = d;
    }
    dev.pass = NumTraits<Num>::negligible(dev.max_deviation);
    report.pass = report.pass && dev.pass;
    report.alphas.push_back(std::move(dev));
  }
  return report;
}

/// For every declared a1 < a2: E[M(a2) | F^X_a1 v F^Y_a1] == M(a1).
/// `m[a]` must be F^Y_a-measurable.
template <class Num>
CheckReport<Num> check_martingale_condition(const std::vector<Rv<Num>>& m, const Rv<Num>& x, const Rv<Num>& y,
                                            const CompatStructure<Num>& c) {
  detail::require_same_space(x, y);
  detail::require_alphas(c);
  if (m.size() != c.size()) throw PreconditionError("martingale family must have one variable per alpha");
  if (!c.has_order()) throw PreconditionError("martingale condition needs a declared partial order");
  for (std::size_t a = 0; a < c.size(); ++a) {
    detail::require_same_space(m[a], y);
    if (!sigma_of(m[a]).coarser_than(c.y_partition(a, y)))
      throw PreconditionError("M(" + c.alphas()[a].name + ") is not F^Y-measurable");
  }
  CheckReport<Num> report{"martingale", {}, true};
  for (auto [a1, a2] : c.ordered_pairs()) {
    auto big = join(c.x_partition(a1, x), c.y_partition(a1, y));
    Num d = max_abs_difference(cond_exp(m[a2], big), m[a1]);
    AlphaDeviation<Num> dev{c.alphas()[a1].name + "<" + c.alphas()[a2].name, d, {{"M", d}},
                            NumTraits<Num>::negligible(d)};
    report.pass = report.pass && dev.pass;
    report.alphas.push_back(std::move(dev));
  }
  return report;
}

/// F^X_a is contained in F^Y_a, alpha by alpha.
template <class Num>
std::vector<bool> check_adapted(const Rv<Num>& x, const Rv<Num>& y, const CompatStructure<Num>& c) {
  detail::require_same_space(x, y);
  std::vector<bool> out;
  out.reserve(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) out.push_back(c.x_partition(a, x).coarser_than(c.y_partition(a, y)));
  return out;
}

}  // namespace compatlab::exact
