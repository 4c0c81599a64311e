#pragma once

// Euler schemes for Itô and semimartingale equations, multiple time-change
// equations, and McKean-Vlasov particle systems.

#include "compatlab/paths/drivers.hpp"

#include <functional>

namespace compatlab::paths {

/// dX = b(X) dt + sigma(X) dW with X in R^d and W in R^m.
struct ItoSpec {
  std::size_t dim = 1;
  std::size_t noise = 1;
  /// Writes sigma(x) row-major into out[d * m].
  std::function<void(const double* x, double* out)> sigma;
  /// Writes b(x) into out[d].
  std::function<void(const double* x, double* out)> drift;
};

/// X_{k+1} = X_k + b(X_k) dt + sigma(X_k) dW_k. Throws SolverError with the
/// path index on a non-finite coefficient or state.
PathEnsemble euler_ito(const ItoSpec& spec, const std::vector<double>& x0, const PathEnsemble& w, unsigned threads = 1);

/// X = U + int H(X, s-) dV. H sees the solution only through its prefix up to
/// the current step and writes a d x m matrix (row-major) into out.
struct SemimartingaleSpec {
  std::size_t dim = 1;
  std::function<void(const PathPrefix& x, std::size_t step, double t, double* out)> integrand;
};

/// X_k = U_k + sum_{i<k} H(X, t_i) (V_{i+1} - V_i). U has `dim` dimensions and
/// V any number m; both must share the grid and path count.
PathEnsemble euler_semimartingale(const SemimartingaleSpec& spec, const PathEnsemble& u, const PathEnsemble& v,
                                  unsigned threads = 1);

/// X(t) = x0 + sum_k W_k(tau_k(t)) zeta_k + int F(X) ds,
/// tau_k(t) = int beta_k(X) ds.
struct TimeChangeSpec {
  std::size_t dim = 1;
  std::size_t clocks = 1;
  std::function<double(std::size_t k, const double* x)> beta;
  std::vector<std::vector<double>> zeta;  ///< zeta[k] in R^d
  /// Writes F(x) into out[d]; empty means F = 0.
  std::function<void(const double* x, double* out)> drift;
};

struct TimeChangeResult {
  PathEnsemble x;
  PathEnsemble tau;    ///< one dimension per clock
  PathEnsemble gamma;  ///< int F(X) ds
};

/// One path with caller-supplied Brownian oracles (one per clock). Writes into
/// row p of the result ensembles.
void time_change_path(const TimeChangeSpec& spec, const std::vector<double>& x0, std::vector<BrownianOracle>& w,
                      TimeChangeResult& out, std::size_t p);

/// Clock k of path p uses BrownianOracle(seed, p, clock(k)).
TimeChangeResult time_change_euler(const TimeChangeSpec& spec, const std::vector<double>& x0, const TimeGrid& grid,
                                   std::size_t paths, std::uint64_t seed, unsigned threads = 1);

/// Empirical law of the particles at one step.
class EmpiricalLaw {
 public:
  EmpiricalLaw(const double* data, std::size_t particles, std::size_t dims, std::size_t stride);
  std::size_t size() const { return particles_; }
  std::size_t dims() const { return dims_; }
  const double* particle(std::size_t i) const { return data_ + i * stride_; }
  double mean(std::size_t j = 0) const { return means_[j]; }

 private:
  const double* data_;
  std::size_t particles_;
  std::size_t dims_;
  std::size_t stride_;
  std::vector<double> means_;
};

struct McKeanVlasovSpec {
  std::size_t dim = 1;
  std::size_t noise = 1;
  std::function<void(const double* x, const EmpiricalLaw& law, double* out)> sigma;
  std::function<void(const double* x, const EmpiricalLaw& law, double* out)> drift;
  /// Initial value of particle i; may draw from the supplied stream.
  std::function<void(std::size_t i, Stream& s, double* out)> initial;
};

/// Particle i uses Stream(seed, i, brownian) for its noise and
/// Stream(seed, i, initial) for its initial value.
PathEnsemble mckean_vlasov(const McKeanVlasovSpec& spec, std::size_t particles, const TimeGrid& grid,
                           std::uint64_t seed);

/// int_0^T min(|x(s) - y(s)|, 1) ds with left endpoints; |.| is the Euclidean norm.
double dm_metric(const PathView& x, const PathView& y, const TimeGrid& grid);

}  // namespace compatlab::paths
