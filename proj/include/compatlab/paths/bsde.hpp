#pragma once

// Backward equations on finite binary trees, where every conditional
// expectation is an exact weighted sum over subtrees.
//
// Level k has 2^k nodes; node i at level k has children 2i (probability 1 - q)
// and 2i + 1 (probability q). Level k sits at time t_k = k T / N.

#include "compatlab/error.hpp"

#include <functional>
#include <vector>

namespace compatlab::paths {

using Levels = std::vector<std::vector<double>>;  ///< levels[k][node]

struct TreeDriver {
  std::size_t depth = 0;
  double horizon = 1;
  Levels u;  ///< U per node
  Levels v;  ///< V per node
  Levels q;  ///< probability of the odd child, levels 0..depth-1

  double h() const { return horizon / static_cast<double>(depth); }
  double t(std::size_t k) const { return horizon * static_cast<double>(k) / static_cast<double>(depth); }
  std::size_t leaves() const { return std::size_t{1} << depth; }
  void validate() const;
};

/// Driver with values from u_fn(k, node), v_fn(k, node) and a constant branching probability.
TreeDriver make_tree(std::size_t depth, double horizon, double q,
                     const std::function<double(std::size_t, std::size_t)>& u_fn,
                     const std::function<double(std::size_t, std::size_t)>& v_fn);

/// f(step j, X along the leaf at levels j+1..N, V along the leaf at levels 0..N).
/// The X segment is the solution shifted one step ahead and restricted to times
/// after t_j, so f can only depend on x(. v t) through the shift.
using BsdeDriverFn = std::function<double(std::size_t step, const std::vector<double>& x_future,
                                          const std::vector<double>& v_path)>;
/// Declared integrable bound g(step, V path) >= |f|.
using BsdeBoundFn = std::function<double(std::size_t step, const std::vector<double>& v_path)>;

struct BsdeResult {
  Levels x;
  Levels z;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> sup_changes;  ///< sup-node change after each iteration
};

/// Picard iteration X <- U + Z[X], Z(t_k) = E[sum_{j>=k} f_j h | F_k], from X = U.
/// Stops when the sup change drops below tol (converged) or after max_iter.
BsdeResult bsde_solve(const TreeDriver& tree, const BsdeDriverFn& f, double tol, std::size_t max_iter);

/// E[g(node at level k) | node at level `level`] for a function defined on level k >= level.
std::vector<double> condition_down(const TreeDriver& tree, std::vector<double> values, std::size_t from_level,
                                   std::size_t to_level);

/// sum_i E[ |E[Z(t_{i+1}) - Z(t_i) | F_{t_i}]| ] over the partition given by
/// `levels` (sorted, distinct). The default uses every level.
double conditional_variation(const TreeDriver& tree, const Levels& z, std::vector<std::size_t> levels = {});

/// E[sum_j g_j h] over the tree.
double expected_bound(const TreeDriver& tree, const BsdeBoundFn& g);

/// conditional_variation(z) <= expected_bound(g), up to a relative slack of
/// 1e-12; throws VerificationFailure otherwise. Returns (variation, bound).
std::pair<double, double> check_variation_bound(const TreeDriver& tree, const Levels& z, const BsdeBoundFn& g);

}  // namespace compatlab::paths
