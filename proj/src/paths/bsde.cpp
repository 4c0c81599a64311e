#include "compatlab/paths/bsde.hpp"

#include <cmath>
#include <string>

namespace compatlab::paths {

namespace {

std::vector<double> along_leaf(const Levels& values, std::size_t depth, std::size_t leaf, std::size_t from) {
  std::vector<double> out;
  out.reserve(depth + 1 - from);
  for (std::size_t k = from; k <= depth; ++k) out.push_back(values[k][leaf >> (depth - k)]);
  return out;
}

// Z[X] on every level.
Levels compute_z(const TreeDriver& tree, const Levels& x, const BsdeDriverFn& f) {
  const std::size_t n = tree.depth, leaves = tree.leaves();
  const double h = tree.h();
  Levels z(n + 1);
  z[n].assign(leaves, 0.0);
  std::vector<Levels::value_type> step_means(n);
  std::vector<double> fh(leaves);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t leaf = 0; leaf < leaves; ++leaf)
      fh[leaf] = f(j, along_leaf(x, n, leaf, j + 1), along_leaf(tree.v, n, leaf, 0)) * h;
    step_means[j] = condition_down(tree, fh, n, j);
  }
  for (std::size_t k = n; k-- > 0;) {
    z[k].resize(std::size_t{1} << k);
    for (std::size_t i = 0; i < z[k].size(); ++i)
      z[k][i] = step_means[k][i] + (1 - tree.q[k][i]) * z[k + 1][2 * i] + tree.q[k][i] * z[k + 1][2 * i + 1];
  }
  return z;
}

}  // namespace

void TreeDriver::validate() const {
  if (depth < 1 || depth > 20) throw PreconditionError("tree depth must be between 1 and 20");
  if (!(horizon > 0)) throw PreconditionError("tree horizon must be positive");
  if (u.size() != depth + 1 || v.size() != depth + 1 || q.size() != depth)
    throw PreconditionError("tree needs depth + 1 levels of U and V and depth levels of q");
  for (std::size_t k = 0; k <= depth; ++k) {
    const std::size_t width = std::size_t{1} << k;
    if (u[k].size() != width || v[k].size() != width) throw PreconditionError("tree level has the wrong width");
    if (k < depth) {
      if (q[k].size() != width) throw PreconditionError("branching level has the wrong width");
      for (double p : q[k])
        if (!(p >= 0 && p <= 1)) throw PreconditionError("branching probability outside [0, 1]");
    }
  }
}

TreeDriver make_tree(std::size_t depth, double horizon, double q,
                     const std::function<double(std::size_t, std::size_t)>& u_fn,
                     const std::function<double(std::size_t, std::size_t)>& v_fn) {
  TreeDriver t{depth, horizon, Levels(depth + 1), Levels(depth + 1), Levels(depth)};
  if (depth > 20) throw PreconditionError("tree depth must be between 1 and 20");
  for (std::size_t k = 0; k <= depth; ++k) {
    const std::size_t width = std::size_t{1} << k;
    for (std::size_t i = 0; i < width; ++i) {
      t.u[k].push_back(u_fn(k, i));
      t.v[k].push_back(v_fn(k, i));
    }
    if (k < depth) t.q[k].assign(width, q);
  }
  t.validate();
  return t;
}

std::vector<double> condition_down(const TreeDriver& tree, std::vector<double> values, std::size_t from_level,
                                   std::size_t to_level) {
  if (to_level > from_level || values.size() != (std::size_t{1} << from_level))
    throw PreconditionError("conditioning needs values on a level at or below the target level");
  for (std::size_t k = from_level; k > to_level; --k) {
    std::vector<double> parent(std::size_t{1} << (k - 1));
    for (std::size_t i = 0; i < parent.size(); ++i)
      parent[i] = (1 - tree.q[k - 1][i]) * values[2 * i] + tree.q[k - 1][i] * values[2 * i + 1];
    values = std::move(parent);
  }
  return values;
}

BsdeResult bsde_solve(const TreeDriver& tree, const BsdeDriverFn& f, double tol, std::size_t max_iter) {
  tree.validate();
  if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
  BsdeResult r{tree.u, Levels(tree.depth + 1), 0, false, {}};
  for (std::size_t k = 0; k <= tree.depth; ++k) r.z[k].assign(tree.u[k].size(), 0.0);
  while (r.iterations < max_iter) {
    auto z = compute_z(tree, r.x, f);
    double change = 0;
    for (std::size_t k = 0; k <= tree.depth; ++k)
      for (std::size_t i = 0; i < z[k].size(); ++i) {
        const double next = tree.u[k][i] + z[k][i];
        if (!std::isfinite(next)) throw SolverError("non-finite BSDE iterate", i);
        change = std::max(change, std::abs(next - r.x[k][i]));
        r.x[k][i] = next;
      }
    r.z = std::move(z);
    ++r.iterations;
    r.sup_changes.push_back(change);
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

double conditional_variation(const TreeDriver& tree, const Levels& z, std::vector<std::size_t> levels) {
  tree.validate();
  if (levels.empty())
    for (std::size_t k = 0; k <= tree.depth; ++k) levels.push_back(k);
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] > tree.depth || (i > 0 && levels[i] <= levels[i - 1]))
      throw PreconditionError("partition levels must be increasing and within the tree");
  double total = 0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const std::size_t a = levels[i], b = levels[i + 1];
    auto drift = condition_down(tree, z[b], b, a);
    for (std::size_t node = 0; node < drift.size(); ++node) drift[node] = std::abs(drift[node] - z[a][node]);
    total += condition_down(tree, drift, a, 0)[0];
  }
  return total;
}

double expected_bound(const TreeDriver& tree, const BsdeBoundFn& g) {
  tree.validate();
  const std::size_t n = tree.depth;
  std::vector<double> per_leaf(tree.leaves(), 0.0);
  for (std::size_t leaf = 0; leaf < tree.leaves(); ++leaf) {
    auto v = along_leaf(tree.v, n, leaf, 0);
    for (std::size_t j = 0; j < n; ++j) per_leaf[leaf] += g(j, v) * tree.h();
  }
  return condition_down(tree, per_leaf, n, 0)[0];
}

std::pair<double, double> check_variation_bound(const TreeDriver& tree, const Levels& z, const BsdeBoundFn& g) {
  const double variation = conditional_variation(tree, z);
  const double bound = expected_bound(tree, g);
  if (variation > bound + 1e-12 * std::abs(bound))
    throw VerificationFailure("conditional variation " + std::to_string(variation) + " exceeds the bound " +
                              std::to_string(bound));
  return {variation, bound};
}

}  // namespace compatlab::paths
