#include "compatlab/paths/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <set>

using namespace compatlab::paths;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are keyed by seed, index and purpose") {
  auto first = [](std::uint64_t seed, std::uint32_t index, std::uint32_t tag) {
    Stream s(seed, index, tag);
    return s.next_u64();
  };
  std::set<std::uint64_t> seen{first(1, 0, purpose::brownian), first(2, 0, purpose::brownian),
                               first(1, 1, purpose::brownian), first(1, 0, purpose::jumps),
                               first(1ULL << 40, 0, purpose::brownian)};
  CHECK(seen.size() == 5);
  CHECK(first(7, 3, purpose::aux(1)) == first(7, 3, purpose::aux(1)));
}

TEST_CASE("uniforms stay inside the open unit interval") {
  Stream s(5, 0, 1);
  double lo = 1, hi = 0, sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0);
  CHECK(hi < 1);
  // Mean 1/2, standard error sqrt(1/12 / n).
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-10));
}

TEST_CASE("normal moments") {
  Stream s(11, 0, 1);
  const int n = 200000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    double z = s.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 4 / std::sqrt(n));
  CHECK(std::abs(m2 - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3) < 4 * std::sqrt(96.0 / n));
}
