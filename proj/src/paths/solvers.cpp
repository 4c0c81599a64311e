#include "compatlab/paths/solvers.hpp"

#include <cmath>

namespace compatlab::paths {

namespace {

void require_finite(const double* v, std::size_t n, std::size_t path, const char* what) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(v[i])) throw SolverError(std::string("non-finite ") + what, path);
}

}  // namespace

PathEnsemble euler_ito(const ItoSpec& spec, const std::vector<double>& x0, const PathEnsemble& w, unsigned threads) {
  const std::size_t d = spec.dim, m = spec.noise;
  if (x0.size() != d) throw PreconditionError("initial value has the wrong dimension");
  if (w.dims() != m) throw PreconditionError("driver dimension does not match the noise dimension");
  const auto& grid = w.grid();
  PathEnsemble x(grid, w.paths(), d, w.provenance());
  x.provenance().tag = "euler_ito";
  parallel_for(w.paths(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> sig(d * m), b(d), inc(d);
    for (std::size_t p = begin; p < end; ++p) {
      std::copy(x0.begin(), x0.end(), x.row(p, 0));
      for (std::size_t k = 0; k < grid.steps(); ++k) {
        const double* xk = x.row(p, k);
        spec.sigma(xk, sig.data());
        spec.drift(xk, b.data());
        require_finite(sig.data(), sig.size(), p, "diffusion coefficient");
        require_finite(b.data(), d, p, "drift coefficient");
        const double dt = grid.dt(k);
        for (std::size_t i = 0; i < d; ++i) inc[i] = b[i] * dt;
        for (std::size_t j = 0; j < m; ++j) {
          const double dw = w(p, k + 1, j) - w(p, k, j);
          for (std::size_t i = 0; i < d; ++i) inc[i] += sig[i * m + j] * dw;
        }
        double* next = x.row(p, k + 1);
        for (std::size_t i = 0; i < d; ++i) next[i] = xk[i] + inc[i];
        require_finite(next, d, p, "state");
      }
    }
  });
  return x;
}

PathEnsemble euler_semimartingale(const SemimartingaleSpec& spec, const PathEnsemble& u, const PathEnsemble& v,
                                  unsigned threads) {
  const std::size_t d = spec.dim, m = v.dims();
  if (u.dims() != d) throw PreconditionError("U has the wrong dimension");
  if (u.grid() != v.grid() || u.paths() != v.paths()) throw PreconditionError("U and V must share grid and paths");
  const auto& grid = v.grid();
  PathEnsemble x(grid, v.paths(), d, v.provenance());
  x.provenance().tag = "euler_semimartingale";
  parallel_for(v.paths(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> h(d * m), s(d);
    for (std::size_t p = begin; p < end; ++p) {
      std::fill(s.begin(), s.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) x(p, 0, i) = u(p, 0, i);
      for (std::size_t k = 0; k < grid.steps(); ++k) {
        spec.integrand(PathPrefix(x.path(p), k), k, grid.t(k), h.data());
        require_finite(h.data(), h.size(), p, "integrand");
        for (std::size_t j = 0; j < m; ++j) {
          const double dv = v(p, k + 1, j) - v(p, k, j);
          for (std::size_t i = 0; i < d; ++i) s[i] += h[i * m + j] * dv;
        }
        for (std::size_t i = 0; i < d; ++i) x(p, k + 1, i) = u(p, k + 1, i) + s[i];
        require_finite(x.row(p, k + 1), d, p, "state");
      }
    }
  });
  return x;
}

void time_change_path(const TimeChangeSpec& spec, const std::vector<double>& x0, std::vector<BrownianOracle>& w,
                      TimeChangeResult& out, std::size_t p) {
  const std::size_t d = spec.dim, m = spec.clocks;
  const auto& grid = out.x.grid();
  std::vector<double> tau(m, 0.0), gamma(d, 0.0), f(d, 0.0);
  std::copy(x0.begin(), x0.end(), out.x.row(p, 0));
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double* xk = out.x.row(p, k);
    const double dt = grid.dt(k);
    for (std::size_t c = 0; c < m; ++c) {
      const double beta = spec.beta(c, xk);
      if (!(beta >= 0)) throw ModelError("clock rate beta_" + std::to_string(c) + " is negative or not a number");
      tau[c] += beta * dt;
    }
    if (spec.drift) {
      spec.drift(xk, f.data());
      require_finite(f.data(), d, p, "drift");
      for (std::size_t i = 0; i < d; ++i) gamma[i] += f[i] * dt;
    }
    double* next = out.x.row(p, k + 1);
    for (std::size_t i = 0; i < d; ++i) next[i] = x0[i];
    for (std::size_t c = 0; c < m; ++c) {
      const double wc = w[c].at(tau[c]);
      for (std::size_t i = 0; i < d; ++i) next[i] += wc * spec.zeta[c][i];
    }
    for (std::size_t i = 0; i < d; ++i) next[i] += gamma[i];
    require_finite(next, d, p, "state");
    std::copy(tau.begin(), tau.end(), out.tau.row(p, k + 1));
    std::copy(gamma.begin(), gamma.end(), out.gamma.row(p, k + 1));
  }
}

TimeChangeResult time_change_euler(const TimeChangeSpec& spec, const std::vector<double>& x0, const TimeGrid& grid,
                                   std::size_t paths, std::uint64_t seed, unsigned threads) {
  if (x0.size() != spec.dim) throw PreconditionError("initial value has the wrong dimension");
  if (spec.zeta.size() != spec.clocks) throw PreconditionError("need one zeta vector per clock");
  for (const auto& z : spec.zeta)
    if (z.size() != spec.dim) throw PreconditionError("zeta vectors must have the state dimension");
  Provenance prov{seed, {}, "time_change"};
  TimeChangeResult out{PathEnsemble(grid, paths, spec.dim, prov), PathEnsemble(grid, paths, spec.clocks, prov),
                       PathEnsemble(grid, paths, spec.dim, prov)};
  parallel_for(paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      std::vector<BrownianOracle> w;
      for (std::size_t c = 0; c < spec.clocks; ++c)
        w.emplace_back(seed, static_cast<std::uint32_t>(p), purpose::clock(static_cast<std::uint32_t>(c)));
      time_change_path(spec, x0, w, out, p);
    }
  });
  return out;
}

EmpiricalLaw::EmpiricalLaw(const double* data, std::size_t particles, std::size_t dims, std::size_t stride)
    : data_(data), particles_(particles), dims_(dims), stride_(stride), means_(dims, 0.0) {
  for (std::size_t i = 0; i < particles_; ++i)
    for (std::size_t j = 0; j < dims_; ++j) means_[j] += particle(i)[j];
  for (auto& m : means_) m /= static_cast<double>(particles_);
}

PathEnsemble mckean_vlasov(const McKeanVlasovSpec& spec, std::size_t particles, const TimeGrid& grid,
                           std::uint64_t seed) {
  if (particles < 2) throw PreconditionError("McKean-Vlasov needs at least two particles");
  const std::size_t d = spec.dim, m = spec.noise;
  PathEnsemble x(grid, particles, d, {seed, {}, "mckean_vlasov"});
  std::vector<Stream> noise;
  noise.reserve(particles);
  for (std::size_t i = 0; i < particles; ++i) {
    Stream init(seed, static_cast<std::uint32_t>(i), purpose::initial);
    spec.initial(i, init, x.row(i, 0));
    require_finite(x.row(i, 0), d, i, "initial value");
    noise.emplace_back(seed, static_cast<std::uint32_t>(i), purpose::brownian);
  }
  const std::size_t stride = grid.points() * d;
  std::vector<double> sig(d * m), b(d), dw(m);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    EmpiricalLaw law(x.row(0, k), particles, d, stride);
    const double dt = grid.dt(k), sd = std::sqrt(dt);
    for (std::size_t i = 0; i < particles; ++i) {
      const double* xk = x.row(i, k);
      spec.sigma(xk, law, sig.data());
      spec.drift(xk, law, b.data());
      require_finite(sig.data(), sig.size(), i, "diffusion coefficient");
      require_finite(b.data(), d, i, "drift coefficient");
      for (std::size_t j = 0; j < m; ++j) dw[j] = sd * noise[i].normal();
      double* next = x.row(i, k + 1);
      for (std::size_t r = 0; r < d; ++r) {
        double inc = b[r] * dt;
        for (std::size_t j = 0; j < m; ++j) inc += sig[r * m + j] * dw[j];
        next[r] = xk[r] + inc;
      }
      require_finite(next, d, i, "state");
    }
  }
  return x;
}

double dm_metric(const PathView& x, const PathView& y, const TimeGrid& grid) {
  if (x.points() != grid.points() || y.points() != grid.points() || x.dims() != y.dims())
    throw PreconditionError("d_m needs two paths on the same grid");
  double total = 0;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    double sq = 0;
    for (std::size_t j = 0; j < x.dims(); ++j) {
      const double diff = x(k, j) - y(k, j);
      sq += diff * diff;
    }
    total += std::min(std::sqrt(sq), 1.0) * grid.dt(k);
  }
  return total;
}

}  // namespace compatlab::paths
