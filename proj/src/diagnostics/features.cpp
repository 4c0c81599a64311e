#include "compatlab/diagnostics/features.hpp"

#include <algorithm>
#include <cmath>

namespace compatlab::diagnostics {

using paths::PathEnsemble;
using paths::PathPrefix;

namespace {

std::vector<double> anchors(double t, std::size_t m) {
  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = t * static_cast<double>(i + 1) / static_cast<double>(m);
  return s;
}

// int_a^b g(x(u)) du for the step interpolant of x, x held at x_N beyond T.
double window_integral(const PathPrefix& x, const paths::TimeGrid& grid, std::size_t j, double a, double b,
                       const std::function<double(double)>& g) {
  double sum = 0;
  const double horizon = grid.horizon();
  std::size_t k = a >= horizon ? grid.steps() : grid.floor_index(a);
  for (; k < grid.steps(); ++k) {
    const double lo = std::max(a, grid.t(k)), hi = std::min(b, grid.t(k + 1));
    if (lo >= b) break;
    if (hi > lo) sum += g(x(k, j)) * (hi - lo);
  }
  if (b > horizon) sum += g(x(grid.steps(), j)) * (b - std::max(a, horizon));
  return sum;
}

}  // namespace

FeatureMatrix features_temporal(const PathEnsemble& e, double t, std::size_t m) {
  if (m == 0) throw PreconditionError("temporal features need at least one time");
  if (!(t >= 0) || t > e.grid().horizon() * (1 + 1e-12)) throw PreconditionError("feature time beyond the horizon");
  const auto times = anchors(t, m);
  const std::size_t last = e.grid().floor_index(t);
  std::vector<std::size_t> idx;
  for (double s : times) idx.push_back(e.grid().floor_index(s));
  FeatureMatrix f(e.paths(), m * e.dims());
  for (std::size_t p = 0; p < e.paths(); ++p) {
    PathPrefix x(e.path(p), last);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < e.dims(); ++j) f(p, i * e.dims() + j) = x(idx[i], j);
  }
  return f;
}

Basis basis(const std::string& id) {
  if (id == "id") return {id, [](double x) { return x; }};
  if (id == "sin") return {id, [](double x) { return std::sin(x); }};
  if (id == "cos") return {id, [](double x) { return std::cos(x); }};
  if (id == "atan") return {id, [](double x) { return std::atan(x); }};
  if (id == "sq") return {id, [](double x) { return x * x; }};
  if (id == "clip") return {id, [](double x) { return std::clamp(x, -1.0, 1.0); }};
  throw PreconditionError("unknown basis function '" + id + "'");
}

FeatureMatrix features_rc(const PathEnsemble& e, double t, double eps, double r, const std::vector<Basis>& g,
                          Window side, std::size_t m) {
  if (!(r > 0) || !(r < eps)) throw PreconditionError("window length must satisfy 0 < r < eps");
  if (m == 0 || g.empty()) throw PreconditionError("RC features need anchors and basis functions");
  const auto& grid = e.grid();
  if (!(t >= 0) || t > grid.horizon() * (1 + 1e-12)) throw PreconditionError("feature time beyond the horizon");
  const auto s = anchors(t, m);

  // Backward windows end at s <= t; forward windows end before t + eps.
  std::size_t last;
  if (side == Window::backward) {
    last = grid.floor_index(t);
  } else {
    const double reach = t + eps;
    if (reach > grid.horizon()) {
      last = grid.steps();
    } else {
      last = static_cast<std::size_t>(std::floor(reach * static_cast<double>(grid.steps()) / grid.horizon()));
      while (last > 0 && grid.t(last) >= reach) --last;
    }
  }

  const std::size_t d = e.dims();
  FeatureMatrix f(e.paths(), m * g.size() * d);
  for (std::size_t p = 0; p < e.paths(); ++p) {
    PathPrefix x(e.path(p), last);
    std::size_t c = 0;
    for (double si : s)
      for (const auto& b : g)
        for (std::size_t j = 0; j < d; ++j) {
          const double lo = side == Window::backward ? std::max(si - r, 0.0) : si;
          const double hi = side == Window::backward ? si : si + r;
          f(p, c++) = window_integral(x, grid, j, lo, hi, b.g);
        }
  }
  return f;
}

FeatureMatrix polynomial(const FeatureMatrix& raw, std::size_t degree) {
  if (degree == 0) throw PreconditionError("polynomial degree must be at least 1");
  const Eigen::Index c = raw.cols();
  Eigen::Index cols = c;
  if (degree >= 2) cols += c * (c + 1) / 2;
  if (degree >= 3) cols += c * static_cast<Eigen::Index>(degree - 2);
  FeatureMatrix out(raw.rows(), cols);
  out.leftCols(c) = raw;
  Eigen::Index k = c;
  if (degree >= 2)
    for (Eigen::Index a = 0; a < c; ++a)
      for (Eigen::Index b = a; b < c; ++b) out.col(k++) = raw.col(a).cwiseProduct(raw.col(b));
  for (std::size_t power = 3; power <= degree; ++power)
    for (Eigen::Index a = 0; a < c; ++a) out.col(k++) = raw.col(a).array().pow(static_cast<double>(power)).matrix();
  return out;
}

}  // namespace compatlab::diagnostics
