#include "compatlab/exact/space.hpp"

#include "doctest.h"

#include <random>

using namespace compatlab;
using namespace compatlab::exact;
using Q = Rational;

namespace {

// {+1,-1}^k with uniform weights; atom a has coordinate i equal to -1 iff bit i is set.
SpacePtr<Q> sign_cube(unsigned k, std::vector<Rv<Q>>& coords) {
  const unsigned n = 1u << k;
  std::vector<std::string> atoms;
  std::vector<Q> weights;
  for (unsigned a = 0; a < n; ++a) {
    atoms.push_back("w" + std::to_string(a));
    weights.emplace_back(1, n);
  }
  auto space = make_space<Q>(atoms, weights);
  for (unsigned i = 0; i < k; ++i) {
    std::vector<Q> vals;
    for (unsigned a = 0; a < n; ++a) vals.push_back((a >> i) & 1u ? Q(-1) : Q(1));
    coords.push_back(Rv<Q>::scalar(space, vals));
  }
  return space;
}

Rv<Q> product(const Rv<Q>& a, const Rv<Q>& b) {
  std::vector<Q> vals;
  for (std::size_t i = 0; i < a.size(); ++i) vals.push_back(a.scalar_at(i) * b.scalar_at(i));
  return Rv<Q>::scalar(a.space(), vals);
}

}  // namespace

TEST_CASE("finite space invariants") {
  CHECK_THROWS_AS(make_space<Q>({"a", "b"}, {Q(1, 2), Q(1, 3)}), StructuralError);
  CHECK_THROWS_AS(make_space<Q>({"a", "a"}, {Q(1, 2), Q(1, 2)}), StructuralError);
  CHECK_THROWS_AS(make_space<Q>({"a", "b"}, {Q(3, 2), Q(-1, 2)}), StructuralError);
  CHECK_NOTHROW(make_space<double>({"a", "b"}, {0.5, 0.5 + 1e-13}));
  CHECK_THROWS_AS(make_space<double>({"a", "b"}, {0.5, 0.6}), StructuralError);
}

TEST_CASE("sigma_of level sets") {
  std::vector<Rv<Q>> z;
  auto space = sign_cube(4, z);

  SUBCASE("constant variable gives one block") {
    auto c = Rv<Q>::scalar(space, std::vector<Q>(16, Q(7)));
    CHECK(sigma_of(c).block_count() == 1);
  }
  SUBCASE("injective variable gives singletons") {
    auto small = make_space<Q>({"a", "b", "c", "d"}, {Q(1, 4), Q(1, 4), Q(1, 4), Q(1, 4)});
    auto inj = Rv<Q>::scalar(small, {Q(3), Q(1), Q(4), Q(2)});
    CHECK(sigma_of(inj).block_count() == 4);
    CHECK(sigma_of(inj) == discrete_partition(small));
  }
  SUBCASE("Y1 = z1 z2 splits the cube into two halves") {
    auto y1 = product(z[0], z[1]);
    auto p = sigma_of(y1);
    // Oracle: count atoms per sign of z1 z2 directly from the bit pattern.
    int plus = 0, minus = 0;
    for (unsigned a = 0; a < 16; ++a) (((a & 1u) != 0) == ((a & 2u) != 0) ? plus : minus) += 1;
    REQUIRE(p.block_count() == 2);
    auto blocks = p.blocks();
    CHECK(blocks[0].size() == static_cast<std::size_t>(plus));
    CHECK(blocks[1].size() == static_cast<std::size_t>(minus));
    CHECK(plus == 8);
  }
  SUBCASE("mismatched spaces") {
    std::vector<Rv<Q>> other;
    sign_cube(4, other);
    CHECK_THROWS_AS(sigma_of(std::vector<Rv<Q>>{z[0], other[0]}), StructuralError);
  }
}

TEST_CASE("join") {
  std::vector<Rv<Q>> z;
  auto space = sign_cube(2, z);
  auto p = sigma_of(z[0]);
  CHECK(join(p, trivial_partition(space)) == p);
  CHECK(join(p, p) == p);
  // The two parity partitions of {+-1}^2: z1 and z1 z2 together determine everything.
  auto parity = sigma_of(product(z[0], z[1]));
  auto both = join(p, parity);
  CHECK(both.block_count() == 4);
  CHECK(both == discrete_partition(space));

  std::vector<Rv<Q>> other;
  auto other_space = sign_cube(2, other);
  CHECK_THROWS_AS(join(p, trivial_partition(other_space)), StructuralError);
}

TEST_CASE("cond_exp basics") {
  std::vector<Rv<Q>> z;
  auto space = sign_cube(4, z);
  auto c = Rv<Q>::scalar(space, std::vector<Q>(16, Q(5, 3)));
  CHECK(max_abs_difference(cond_exp(c, sigma_of(z[2])), c) == 0);

  auto h = product(z[0], z[3]);
  auto e = cond_exp(h, trivial_partition(space));
  for (std::size_t a = 0; a < 16; ++a) CHECK(e.scalar_at(a) == expectation(h));

  // Y4 = z4 z1 is independent of Y1 = z1 z2.
  auto y1 = product(z[0], z[1]);
  auto y4 = product(z[3], z[0]);
  auto e4 = cond_exp(y4, sigma_of(y1));
  for (std::size_t a = 0; a < 16; ++a) CHECK(e4.scalar_at(a) == 0);
}

TEST_CASE("cond_exp rejects zero-mass blocks") {
  auto space = make_space<Q>({"a", "b", "c"}, {Q(1, 2), Q(1, 2), Q(0)});
  auto h = Rv<Q>::scalar(space, {Q(1), Q(2), Q(3)});
  CHECK_THROWS_AS(cond_exp(h, discrete_partition(space)), StructuralError);
  auto [pruned, kept] = prune(*space);
  CHECK(pruned->size() == 2);
  auto hp = restrict_to(h, pruned, kept);
  CHECK(cond_exp(hp, discrete_partition(pruned)).scalar_at(1) == 2);
}

TEST_CASE("tower and projection properties on random spaces") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    std::vector<std::string> atoms;
    std::vector<long long> counts;
    long long total = 0;
    for (std::size_t a = 0; a < n; ++a) {
      atoms.push_back("a" + std::to_string(a));
      counts.push_back(std::uniform_int_distribution<long long>(1, 9)(rng));
      total += counts.back();
    }
    std::vector<Q> weights;
    for (auto c : counts) weights.emplace_back(c, total);
    auto space = make_space<Q>(atoms, weights);

    std::vector<Q> hv, fine_lab, coarse_lab;
    for (std::size_t a = 0; a < n; ++a) {
      hv.emplace_back(std::uniform_int_distribution<int>(-5, 5)(rng));
      auto f = std::uniform_int_distribution<int>(0, 5)(rng);
      fine_lab.emplace_back(f);
      coarse_lab.emplace_back(f % 2);  // coarse is a function of fine
    }
    auto h = Rv<Q>::scalar(space, hv);
    auto fine = sigma_of(Rv<Q>::scalar(space, fine_lab));
    auto coarse = sigma_of(Rv<Q>::scalar(space, coarse_lab));
    REQUIRE(coarse.coarser_than(fine));

    auto direct = cond_exp(h, coarse);
    CHECK(max_abs_difference(cond_exp(cond_exp(h, fine), coarse), direct) == 0);

    // Any block-constant perturbation increases E[(h - g)^2].
    auto quad = [&](const Rv<Q>& g) {
      Q acc = 0;
      for (std::size_t a = 0; a < n; ++a) acc += space->weight(a) * (h.scalar_at(a) - g.scalar_at(a)) * (h.scalar_at(a) - g.scalar_at(a));
      return acc;
    };
    auto base = quad(direct);
    for (std::size_t b = 0; b < coarse.block_count(); ++b) {
      std::vector<Q> shifted;
      for (std::size_t a = 0; a < n; ++a)
        shifted.push_back(direct.scalar_at(a) + (coarse.block_of(a) == b ? Q(1, 7) : Q(0)));
      CHECK(quad(Rv<Q>::scalar(space, shifted)) > base);
    }
  }
}
