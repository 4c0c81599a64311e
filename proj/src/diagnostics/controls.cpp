#include "compatlab/diagnostics/controls.hpp"

#include <memory>

namespace compatlab::diagnostics {

using paths::PathEnsemble;

PathEnsemble anticipating_control(const PathEnsemble& w) {
  PathEnsemble x(w.grid(), w.paths(), w.dims(), w.provenance());
  x.provenance().tag = "anticipating";
  for (std::size_t p = 0; p < w.paths(); ++p)
    for (std::size_t k = 0; k < w.points(); ++k)
      for (std::size_t j = 0; j < w.dims(); ++j) x(p, k, j) = w(p, w.grid().steps(), j);
  return x;
}

PathEnsemble time_reversed(const PathEnsemble& w) {
  PathEnsemble x(w.grid(), w.paths(), w.dims(), w.provenance());
  x.provenance().tag = "reversed";
  const std::size_t n = w.grid().steps();
  for (std::size_t p = 0; p < w.paths(); ++p)
    for (std::size_t k = 0; k <= n; ++k)
      for (std::size_t j = 0; j < w.dims(); ++j) x(p, k, j) = w(p, n - k, j);
  return x;
}

PathEnsemble tanaka_driver(const PathEnsemble& b) {
  if (b.dims() != 1) throw PreconditionError("the Tanaka driver is one-dimensional");
  PathEnsemble y(b.grid(), b.paths(), 1, b.provenance());
  y.provenance().tag = "tanaka";
  for (std::size_t p = 0; p < b.paths(); ++p)
    for (std::size_t k = 0; k < b.grid().steps(); ++k)
      y(p, k + 1) = y(p, k) + (b(p, k) >= 0 ? 1.0 : -1.0) * (b(p, k + 1) - b(p, k));
  return y;
}

AuxSolver tanaka_solver() {
  return [](const PathEnsemble& y, std::size_t p, paths::Stream& aux, double* out) {
    if (y.dims() != 1) throw PreconditionError("the Tanaka solver takes a one-dimensional driver");
    const double coin = aux.uniform() < 0.5 ? 1.0 : -1.0;
    out[0] = 0;
    for (std::size_t k = 0; k < y.grid().steps(); ++k) {
      const double s = out[k] > 0 ? 1.0 : out[k] < 0 ? -1.0 : coin;
      out[k + 1] = out[k] + s * (y(p, k + 1) - y(p, k));
    }
  };
}

PathEnsemble solve_with_aux(const AuxSolver& solver, const PathEnsemble& driver, std::size_t dims,
                            std::uint64_t seed, std::uint32_t index) {
  PathEnsemble x(driver.grid(), driver.paths(), dims, driver.provenance());
  for (std::size_t p = 0; p < driver.paths(); ++p) {
    paths::Stream aux(seed, static_cast<std::uint32_t>(p), paths::purpose::aux(index));
    solver(driver, p, aux, x.row(p, 0));
  }
  return x;
}

LadderSolver euler_ladder(paths::ItoSpec spec, std::vector<double> x0) {
  return [spec = std::move(spec), x0 = std::move(x0)](const PathEnsemble& w, std::size_t steps) {
    return paths::euler_ito(spec, x0, paths::coarsen(w, steps));
  };
}

LadderSolver euler_reference(const paths::ItoSpec& spec, const std::vector<double>& x0, const PathEnsemble& driver) {
  auto ref = std::make_shared<PathEnsemble>(paths::euler_ito(spec, x0, driver));
  return [ref](const PathEnsemble&, std::size_t) { return *ref; };
}

}  // namespace compatlab::diagnostics
