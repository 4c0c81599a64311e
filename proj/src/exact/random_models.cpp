#include "compatlab/exact/random_models.hpp"

namespace compatlab::exact {

namespace {

std::size_t draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Rational> normalized(const std::vector<long long>& counts) {
  long long total = 0;
  for (auto c : counts) total += c;
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (auto c : counts) out.emplace_back(c, total);
  return out;
}

// Mixed-radix index of a tuple of coordinates.
std::size_t flat(std::initializer_list<std::pair<std::size_t, std::size_t>> digits) {
  std::size_t idx = 0;
  for (auto [value, radix] : digits) idx = idx * radix + value;
  return idx;
}

}  // namespace

std::vector<Value<Rational>> TemporalInputs::x_grid() const {
  std::vector<Value<Rational>> grid;
  for (std::size_t a = 0; a < x_sizes[0]; ++a)
    for (std::size_t b = 0; b < x_sizes[1]; ++b) grid.push_back({Rational(a), Rational(b)});
  return grid;
}

std::vector<Value<Rational>> TemporalInputs::y_grid() const {
  std::vector<Value<Rational>> grid;
  for (std::size_t a = 0; a < y_sizes[0]; ++a)
    for (std::size_t b = 0; b < y_sizes[1]; ++b)
      for (std::size_t c = 0; c < y_sizes[2]; ++c) grid.push_back({Rational(a), Rational(b), Rational(c)});
  return grid;
}

Marginal<Rational> TemporalInputs::nu() const {
  Marginal<Rational> m{y_grid(), {}};
  for (std::size_t a = 0; a < y_sizes[0]; ++a)
    for (std::size_t b = 0; b < y_sizes[1]; ++b)
      for (std::size_t c = 0; c < y_sizes[2]; ++c) m.probs.push_back(y_probs[0][a] * y_probs[1][b] * y_probs[2][c]);
  return m;
}

TemporalInputs ModelGenerator::inputs() {
  TemporalInputs in;
  do {
    for (auto& s : in.y_sizes) s = draw(rng_, 1, 3);
  } while (in.y_sizes[0] * in.y_sizes[1] * in.y_sizes[2] > 8 || in.y_sizes[0] * in.y_sizes[1] * in.y_sizes[2] < 2);
  do {
    for (auto& s : in.x_sizes) s = draw(rng_, 1, 3);
  } while (in.x_sizes[0] * in.x_sizes[1] > 8 || in.x_sizes[0] * in.x_sizes[1] < 2);
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<long long> counts(in.y_sizes[k]);
    for (auto& c : counts) c = static_cast<long long>(draw(rng_, 1, 4));
    in.y_probs[k] = normalized(counts);
  }
  return in;
}

std::vector<Rational> ModelGenerator::random_row(std::size_t size, bool degenerate) {
  std::vector<long long> counts(size, 0);
  if (degenerate || size == 1) {
    counts[draw(rng_, 0, size - 1)] = 1;
  } else {
    do {
      for (auto& c : counts) c = static_cast<long long>(draw(rng_, 0, 3));
    } while (std::all_of(counts.begin(), counts.end(), [](long long c) { return c == 0; }));
  }
  return normalized(counts);
}

KernelKind ModelGenerator::any_kind() {
  switch (draw(rng_, 0, 2)) {
    case 0: return KernelKind::compatible;
    case 1: return KernelKind::anticipating;
    default: return KernelKind::arbitrary;
  }
}

std::vector<Rational> ModelGenerator::terminal_values(std::size_t count) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(static_cast<long long>(draw(rng_, 0, 6)) - 3);
  return out;
}

JointMeasure<Rational> ModelGenerator::solution(const TemporalInputs& in, KernelKind kind, bool strong) {
  const auto [A, B, C] = std::tuple{in.y_sizes[0], in.y_sizes[1], in.y_sizes[2]};
  const auto [P, Q] = std::pair{in.x_sizes[0], in.x_sizes[1]};
  auto nu = in.nu();
  auto xs = in.x_grid();
  auto ys = in.y_grid();
  std::vector<std::vector<Rational>> mass(xs.size(), std::vector<Rational>(ys.size(), Rational(0)));

  if (kind == KernelKind::arbitrary) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      auto row = random_row(xs.size(), strong);
      for (std::size_t i = 0; i < xs.size(); ++i) mass[i][j] = row[i] * nu.probs[j];
    }
    return JointMeasure<Rational>(std::move(xs), std::move(ys), std::move(mass));
  }

  // First-stage rows are indexed by what x1 may read, second-stage rows by
  // what x2 may read (including x1).
  const bool future = kind == KernelKind::anticipating;
  const std::size_t first_inputs = future ? A * B : A;
  const std::size_t second_inputs = (future ? A * B * C : A * B) * P;
  std::vector<std::vector<Rational>> first, second;
  for (std::size_t r = 0; r < first_inputs; ++r) first.push_back(random_row(P, strong));
  for (std::size_t r = 0; r < second_inputs; ++r) second.push_back(random_row(Q, strong));

  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t c = 0; c < C; ++c) {
        const std::size_t j = flat({{a, A}, {b, B}, {c, C}});
        const std::size_t r1 = future ? flat({{a, A}, {b, B}}) : a;
        for (std::size_t p = 0; p < P; ++p)
          for (std::size_t q = 0; q < Q; ++q) {
            const std::size_t r2 = future ? flat({{a, A}, {b, B}, {c, C}, {p, P}}) : flat({{a, A}, {b, B}, {p, P}});
            mass[flat({{p, P}, {q, Q}})][j] = nu.probs[j] * first[r1][p] * second[r2][q];
          }
      }
  return JointMeasure<Rational>(std::move(xs), std::move(ys), std::move(mass));
}

std::vector<JointMeasure<Rational>> ModelGenerator::family(const TemporalInputs& in) {
  const std::size_t target = draw(rng_, 1, 3);
  std::vector<JointMeasure<Rational>> out;
  for (int attempt = 0; out.size() < target && attempt < 64; ++attempt) {
    auto mu = solution(in, KernelKind::compatible, coin());
    if (std::find(out.begin(), out.end(), mu) == out.end()) out.push_back(std::move(mu));
  }
  return out;
}

}  // namespace compatlab::exact
