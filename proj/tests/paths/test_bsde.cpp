#include "compatlab/paths/bsde.hpp"

#include "doctest.h"

#include <bitset>
#include <cmath>

using namespace compatlab;
using namespace compatlab::paths;

namespace {

// Symmetric random walk: node i at level k has popcount(i) up-moves.
double walk(std::size_t k, std::size_t i) {
  return 2.0 * static_cast<double>(std::bitset<32>(i).count()) - static_cast<double>(k);
}

TreeDriver dyadic_tree(std::size_t depth) {
  return make_tree(depth, 1.0, 0.5, [](std::size_t k, std::size_t i) { return 0.5 * walk(k, i) + 1.0; }, walk);
}

// Independent oracle: E[g(V_N) | node] by plain backward induction with q = 1/2.
Levels backward_induction(std::size_t depth, const std::function<double(double)>& g) {
  Levels e(depth + 1);
  for (std::size_t i = 0; i < (std::size_t{1} << depth); ++i) e[depth].push_back(g(walk(depth, i)));
  for (std::size_t k = depth; k-- > 0;)
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) e[k].push_back(0.5 * (e[k + 1][2 * i] + e[k + 1][2 * i + 1]));
  return e;
}

}  // namespace

TEST_CASE("zero driver returns U after one iteration") {
  auto tree = dyadic_tree(6);
  auto r = bsde_solve(tree, [](std::size_t, const std::vector<double>&, const std::vector<double>&) { return 0.0; },
                      1e-12, 10);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.x == tree.u);
}

TEST_CASE("constant driver") {
  auto tree = dyadic_tree(8);
  auto r = bsde_solve(tree, [](std::size_t, const std::vector<double>&, const std::vector<double>&) { return 3.0; },
                      1e-12, 10);
  REQUIRE(r.converged);
  for (std::size_t k = 0; k <= 8; ++k)
    for (std::size_t i = 0; i < r.x[k].size(); ++i) CHECK(r.x[k][i] == tree.u[k][i] + 3.0 * (1.0 - tree.t(k)));
}

TEST_CASE("terminal-value driver matches backward induction") {
  const std::size_t depth = 8;
  auto tree = dyadic_tree(depth);
  auto g = [](double v) { return v * v - 0.5 * v; };
  auto r = bsde_solve(
      tree, [&](std::size_t, const std::vector<double>&, const std::vector<double>& v) { return g(v.back()); }, 1e-12,
      10);
  REQUIRE(r.converged);
  auto e = backward_induction(depth, g);
  for (std::size_t k = 0; k <= depth; ++k)
    for (std::size_t i = 0; i < r.x[k].size(); ++i) {
      CHECK(r.z[k][i] == (1.0 - tree.t(k)) * e[k][i]);
      CHECK(r.x[k][i] == tree.u[k][i] + (1.0 - tree.t(k)) * e[k][i]);
    }
}

TEST_CASE("Picard iteration contracts geometrically") {
  const double lipschitz = 0.5;
  auto tree = dyadic_tree(10);
  auto f = [&](std::size_t, const std::vector<double>& x, const std::vector<double>& v) {
    return lipschitz * std::sin(x.front()) + std::cos(v.back());
  };
  auto r = bsde_solve(tree, f, 1e-13, 50);
  CHECK(r.converged);
  REQUIRE(r.sup_changes.size() >= 2);
  for (std::size_t m = 1; m < r.sup_changes.size(); ++m)
    CHECK(r.sup_changes[m] <= lipschitz * tree.horizon * r.sup_changes[m - 1] * (1 + 1e-9));
}

TEST_CASE("non-convergence is reported with the partial result") {
  auto tree = dyadic_tree(6);
  auto f = [](std::size_t, const std::vector<double>& x, const std::vector<double>&) { return std::sin(x.front()); };
  auto r = bsde_solve(tree, f, 1e-15, 2);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.sup_changes.size() == 2);
}

TEST_CASE("the driver only sees the future of X") {
  auto tree = dyadic_tree(4);
  std::vector<std::size_t> lengths;
  bsde_solve(
      tree,
      [&](std::size_t j, const std::vector<double>& x, const std::vector<double>& v) {
        CHECK(x.size() == tree.depth - j);
        CHECK(v.size() == tree.depth + 1);
        return 0.0;
      },
      1e-12, 1);
}

TEST_CASE("conditional variation of simple processes") {
  auto tree = dyadic_tree(6);
  // Tree martingale: conditional expectations of a terminal value.
  auto e = backward_induction(6, [](double v) { return v * v * v; });
  CHECK(conditional_variation(tree, e) == 0);

  Levels clock(7);
  for (std::size_t k = 0; k <= 6; ++k) clock[k].assign(std::size_t{1} << k, tree.t(k));
  CHECK(conditional_variation(tree, clock) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("coarser partitions never exceed the full one") {
  auto tree = dyadic_tree(8);
  auto r = bsde_solve(
      tree,
      [](std::size_t j, const std::vector<double>& x, const std::vector<double>& v) {
        return std::sin(x.front() + v[j]) * (j % 2 ? 1.0 : -1.0);
      },
      1e-12, 20);
  const double full = conditional_variation(tree, r.z);
  for (const auto& levels : std::vector<std::vector<std::size_t>>{{0, 8}, {0, 4, 8}, {0, 2, 3, 7, 8}, {1, 5}})
    CHECK(conditional_variation(tree, r.z, levels) <= full * (1 + 1e-12));
  CHECK_THROWS_AS(conditional_variation(tree, r.z, {3, 2}), PreconditionError);
}

TEST_CASE("variation bound on BSDE output") {
  const std::size_t depth = 12;
  auto tree = dyadic_tree(depth);
  // |f| <= g(j, v) = 1 + |v_j| / 4.
  auto f = [](std::size_t j, const std::vector<double>& x, const std::vector<double>& v) {
    return std::sin(x.front()) * (1 + std::abs(v[j]) / 4);
  };
  auto g = [](std::size_t j, const std::vector<double>& v) { return 1 + std::abs(v[j]) / 4; };
  auto r = bsde_solve(tree, f, 1e-12, 30);
  REQUIRE(r.converged);
  auto [variation, bound] = check_variation_bound(tree, r.z, g);
  CHECK(variation > 0);
  CHECK(variation <= bound);

  // A bound that is too small is caught.
  CHECK_THROWS_AS(check_variation_bound(tree, r.z, [](std::size_t, const std::vector<double>&) { return 1e-3; }),
                  VerificationFailure);
}

TEST_CASE("tree validation") {
  CHECK_THROWS_AS(make_tree(0, 1.0, 0.5, walk, walk), PreconditionError);
  CHECK_THROWS_AS(make_tree(21, 1.0, 0.5, walk, walk), PreconditionError);
  CHECK_THROWS_AS(make_tree(3, 1.0, 1.5, walk, walk), PreconditionError);
  auto tree = make_tree(3, 1.0, 0.25, walk, walk);
  auto up = condition_down(tree, {1, 2, 3, 4, 5, 6, 7, 8}, 3, 2);
  CHECK(up == std::vector<double>{1.25, 3.25, 5.25, 7.25});
}
