#pragma once

// Reference constructions used as positive and negative controls.

#include "compatlab/diagnostics/checks.hpp"
#include "compatlab/paths/solvers.hpp"

namespace compatlab::diagnostics {

/// X(t) = W(T) for every t: a path that knows the driver's future.
paths::PathEnsemble anticipating_control(const paths::PathEnsemble& w);

/// X(t) = W(T - t): the driver run backwards.
paths::PathEnsemble time_reversed(const paths::PathEnsemble& w);

/// Y = sum sgn(B_i)(B_{i+1} - B_i) with sgn(0) = 1, for a one-dimensional B.
paths::PathEnsemble tanaka_driver(const paths::PathEnsemble& b);

/// X_{k+1} = X_k + sgn(X_k)(Y_{k+1} - Y_k), where the sign at zero is a fair
/// coin drawn from the auxiliary stream. On a Tanaka driver this gives X = +B or -B.
AuxSolver tanaka_solver();

/// Solves with the auxiliary stream Stream(seed, p, aux(index)) for each path.
paths::PathEnsemble solve_with_aux(const AuxSolver& solver, const paths::PathEnsemble& driver, std::size_t dims,
                                   std::uint64_t seed, std::uint32_t index);

/// Euler on the driver coarsened to the requested step count.
LadderSolver euler_ladder(paths::ItoSpec spec, std::vector<double> x0);

/// Euler on the driver at its own resolution, whatever step count is asked for.
/// The result is computed once.
LadderSolver euler_reference(const paths::ItoSpec& spec, const std::vector<double>& x0,
                             const paths::PathEnsemble& driver);

}  // namespace compatlab::diagnostics
