#pragma once

// Feature maps on path ensembles. Rows are paths. Extractors read paths through
// prefix views, so a feature at time t cannot see data it is not entitled to.

#include "compatlab/paths/ensemble.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace compatlab::diagnostics {

using FeatureMatrix = Eigen::MatrixXd;

/// Path values at the m times t i / m (i = 1..m), each rounded down to the
/// grid. Columns are ordered time-major, then dimension.
FeatureMatrix features_temporal(const paths::PathEnsemble& e, double t, std::size_t m);

/// Backward windows [(s - r) v 0, s) for the solution side, forward windows
/// [s, s + r) for the driver side.
enum class Window { backward, forward };

struct Basis {
  std::string id;
  std::function<double(double)> g;
};

/// Named basis functions: id, sin, cos, atan, sq, clip (to [-1, 1]).
Basis basis(const std::string& id);

/// int g(x(u)) du over windows anchored at s_i = t i / m, for every basis
/// function and dimension. The path is the piecewise-constant interpolant of
/// the grid values, held at its terminal value past the horizon.
FeatureMatrix features_rc(const paths::PathEnsemble& e, double t, double eps, double r, const std::vector<Basis>& g,
                          Window side, std::size_t m);

/// The raw columns, all pairwise products when degree >= 2, and pure powers
/// c^k for 3 <= k <= degree.
FeatureMatrix polynomial(const FeatureMatrix& raw, std::size_t degree);

}  // namespace compatlab::diagnostics
