#pragma once

// Uniform time grids and Monte Carlo path arrays. Values at index k belong to
// t_k and hold on [t_k, t_{k+1}).

#include "compatlab/error.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace compatlab::paths {

class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (steps_ < 1) throw PreconditionError("time grid needs at least one step");
    if (!(horizon_ > 0) || !std::isfinite(horizon_)) throw PreconditionError("time grid needs a positive horizon");
  }

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t points() const { return steps_ + 1; }
  double t(std::size_t k) const { return horizon_ * static_cast<double>(k) / static_cast<double>(steps_); }
  double dt(std::size_t k) const { return t(k + 1) - t(k); }

  /// Largest k with t_k <= t. Arguments within 1e-9 steps of a grid point snap to it.
  std::size_t floor_index(double t) const { return static_cast<std::size_t>(std::floor(scaled(t))); }
  /// Smallest k with t_k >= t, with the same snapping.
  std::size_t ceil_index(double t) const { return static_cast<std::size_t>(std::ceil(scaled(t))); }
  /// eta_n(t) = floor(n t / T) T / n.
  double snap(double t) const { return this->t(floor_index(t)); }

  bool operator==(const TimeGrid& o) const { return horizon_ == o.horizon_ && steps_ == o.steps_; }
  bool operator!=(const TimeGrid& o) const { return !(*this == o); }

 private:
  double scaled(double t) const {
    if (t < 0 || t > horizon_ * (1 + 1e-12)) throw PreconditionError("time outside the grid horizon");
    double s = t * static_cast<double>(steps_) / horizon_;
    double r = std::round(s);
    if (std::abs(s - r) < 1e-9) s = r;
    return std::min(s, static_cast<double>(steps_));
  }

  double horizon_;
  std::size_t steps_;
};

/// Where an ensemble came from. Ensembles that are compared or combined must
/// agree on seed and spec hash.
struct Provenance {
  std::uint64_t seed = 0;
  std::string spec_hash;
  std::string tag;
  bool operator==(const Provenance&) const = default;
};

class PathEnsemble;

/// Read-only view of one path.
class PathView {
 public:
  PathView(const double* data, std::size_t points, std::size_t dims) : data_(data), points_(points), dims_(dims) {}
  double operator()(std::size_t k, std::size_t j = 0) const { return data_[k * dims_ + j]; }
  const double* at(std::size_t k) const { return data_ + k * dims_; }
  std::size_t points() const { return points_; }
  std::size_t dims() const { return dims_; }

 private:
  const double* data_;
  std::size_t points_;
  std::size_t dims_;
};

/// The path observed up to and including step `last`. Reading later steps
/// throws, so functionals built on a prefix cannot anticipate.
class PathPrefix {
 public:
  PathPrefix(PathView view, std::size_t last) : view_(view), last_(last) {}
  double operator()(std::size_t k, std::size_t j = 0) const {
    if (k > last_) throw ModelError("non-anticipating functional read step " + std::to_string(k) +
                                    " beyond step " + std::to_string(last_));
    return view_(k, j);
  }
  std::size_t last() const { return last_; }
  std::size_t dims() const { return view_.dims(); }

 private:
  PathView view_;
  std::size_t last_;
};

class PathEnsemble {
 public:
  PathEnsemble(TimeGrid grid, std::size_t paths, std::size_t dims, Provenance prov = {})
      : grid_(grid), paths_(paths), dims_(dims), prov_(std::move(prov)), data_(paths * grid.points() * dims, 0.0) {
    if (dims_ == 0) throw PreconditionError("ensemble needs at least one dimension");
  }

  const TimeGrid& grid() const { return grid_; }
  std::size_t paths() const { return paths_; }
  std::size_t points() const { return grid_.points(); }
  std::size_t dims() const { return dims_; }
  const Provenance& provenance() const { return prov_; }
  Provenance& provenance() { return prov_; }

  double& operator()(std::size_t p, std::size_t k, std::size_t j = 0) { return data_[index(p, k, j)]; }
  double operator()(std::size_t p, std::size_t k, std::size_t j = 0) const { return data_[index(p, k, j)]; }
  double* row(std::size_t p, std::size_t k) { return data_.data() + index(p, k, 0); }
  const double* row(std::size_t p, std::size_t k) const { return data_.data() + index(p, k, 0); }
  PathView path(std::size_t p) const { return {data_.data() + index(p, 0, 0), points(), dims_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const PathEnsemble& o) const {
    return grid_ == o.grid_ && paths_ == o.paths_ && dims_ == o.dims_ && prov_ == o.prov_ && data_ == o.data_;
  }

 private:
  std::size_t index(std::size_t p, std::size_t k, std::size_t j) const { return (p * grid_.points() + k) * dims_ + j; }

  TimeGrid grid_;
  std::size_t paths_;
  std::size_t dims_;
  Provenance prov_;
  std::vector<double> data_;
};

/// Throws ProvenanceError unless the ensembles share grid, path count, seed and spec hash.
void require_same_provenance(const PathEnsemble& a, const PathEnsemble& b);

/// Keeps every (steps_fine / steps)-th point. The fine step count must be a multiple of `steps`.
PathEnsemble coarsen(const PathEnsemble& fine, std::size_t steps);

/// Runs body(begin, end) over [0, count) split into contiguous chunks on up to
/// `threads` threads (0 = hardware concurrency). Bodies must write disjoint data.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body);

}  // namespace compatlab::paths

#include "compatlab/paths/parallel.hpp"
