#include "compatlab/paths/solvers.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace compatlab;
using namespace compatlab::paths;

namespace {

ItoSpec scalar_ito(std::function<double(double)> sigma, std::function<double(double)> drift) {
  ItoSpec s;
  s.sigma = [sigma](const double* x, double* out) { out[0] = sigma(x[0]); };
  s.drift = [drift](const double* x, double* out) { out[0] = drift(x[0]); };
  return s;
}

// V = (t, W) for a scalar Brownian ensemble.
PathEnsemble time_and(const PathEnsemble& w) {
  PathEnsemble v(w.grid(), w.paths(), 2, w.provenance());
  for (std::size_t p = 0; p < w.paths(); ++p)
    for (std::size_t k = 0; k < w.points(); ++k) {
      v(p, k, 0) = w.grid().t(k);
      v(p, k, 1) = w(p, k);
    }
  return v;
}

PathEnsemble constant(const TimeGrid& g, std::size_t paths, double c) {
  PathEnsemble u(g, paths, 1);
  for (std::size_t p = 0; p < paths; ++p)
    for (std::size_t k = 0; k < g.points(); ++k) u(p, k) = c;
  return u;
}

}  // namespace

TEST_CASE("Euler-Ito trivial coefficients") {
  TimeGrid g(1.0, 8);
  auto w = brownian(g, 1, 4, 1);
  auto still = euler_ito(scalar_ito([](double) { return 0.0; }, [](double) { return 0.0; }), {2.5}, w);
  auto ramp = euler_ito(scalar_ito([](double) { return 0.0; }, [](double) { return 1.0; }), {2.5}, w);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t k = 0; k < g.points(); ++k) {
      CHECK(still(p, k) == 2.5);
      CHECK(ramp(p, k) == 2.5 + g.t(k));
    }
}

TEST_CASE("Euler-Ito geometric mean") {
  const double b = 0.5, s = 0.3;
  const std::size_t paths = 100000;
  TimeGrid g(1.0, 128);
  auto w = brownian(g, 1, paths, 2024);
  auto x = euler_ito(scalar_ito([s](double v) { return s * v; }, [b](double v) { return b * v; }), {1.0}, w);
  double sum = 0, sq = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    sum += x(p, g.steps());
    sq += x(p, g.steps()) * x(p, g.steps());
  }
  const double mean = sum / paths;
  const double se = std::sqrt((sq / paths - mean * mean) / paths);
  CHECK(std::abs(mean - std::exp(b)) <= 4 * se);
}

TEST_CASE("Euler-Ito reports the failing path") {
  TimeGrid g(1.0, 16);
  const std::size_t paths = 40;
  auto w = brownian(g, 1, paths, 1);
  // X = W until the drift is evaluated above 1, where it turns into NaN.
  auto blow = scalar_ito([](double) { return 1.0; }, [](double x) { return x > 1.0 ? NAN : 0.0; });
  std::size_t expected = paths;
  for (std::size_t p = 0; p < paths && expected == paths; ++p)
    for (std::size_t k = 0; k < g.steps(); ++k)
      if (w(p, k) > 1.0) {
        expected = p;
        break;
      }
  REQUIRE(expected < paths);
  try {
    euler_ito(blow, {0.0}, w);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.path() == expected);
  }
  CHECK_THROWS_AS(euler_ito(blow, {1.0, 2.0}, w), PreconditionError);
}

TEST_CASE("semimartingale scheme with zero integrand returns U") {
  TimeGrid g(1.0, 16);
  auto w = brownian(g, 1, 3, 4);
  SemimartingaleSpec zero{1, [](const PathPrefix&, std::size_t, double, double* out) { out[0] = 0; }};
  auto x = euler_semimartingale(zero, w, w);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t k = 0; k < g.points(); ++k) CHECK(x(p, k) == w(p, k));
}

TEST_CASE("semimartingale scheme reproduces Euler-Ito") {
  TimeGrid g(1.0, 64);
  const std::size_t paths = 1000;
  auto w = brownian(g, 1, paths, 12);
  auto sigma = [](double x) { return 0.4 + 0.3 * std::sin(x); };
  auto drift = [](double x) { return -0.5 * x; };
  auto ito = euler_ito(scalar_ito(sigma, drift), {1.0}, w);
  SemimartingaleSpec h{1, [&](const PathPrefix& x, std::size_t k, double, double* out) {
                         out[0] = drift(x(k));
                         out[1] = sigma(x(k));
                       }};
  auto semi = euler_semimartingale(h, constant(g, paths, 1.0), time_and(w));
  double worst = 0;
  for (std::size_t p = 0; p < paths; ++p)
    for (std::size_t k = 0; k < g.points(); ++k) {
      const double a = ito(p, k), b = semi(p, k);
      worst = std::max(worst, std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("semimartingale scheme with a single jump") {
  // V jumps by J = 0.75 at tau = 0.3; it is applied at the first grid point >= tau.
  TimeGrid g(1.0, 8);
  PathEnsemble v(g, 1, 1);
  const std::size_t jump_step = g.ceil_index(0.3);
  for (std::size_t k = jump_step; k < g.points(); ++k) v(0, k) = 0.75;
  PathEnsemble u(g, 1, 1);
  for (std::size_t k = 0; k < g.points(); ++k) u(0, k) = std::sin(static_cast<double>(k));
  SemimartingaleSpec h{1, [](const PathPrefix&, std::size_t, double, double* out) { out[0] = 2.0; }};
  auto x = euler_semimartingale(h, u, v);
  for (std::size_t k = 0; k < g.points(); ++k) CHECK(x(0, k) == u(0, k) + (g.t(k) >= g.t(jump_step) ? 1.5 : 0.0));
}

TEST_CASE("integrands cannot read the future") {
  TimeGrid g(1.0, 4);
  auto w = brownian(g, 1, 1, 1);
  SemimartingaleSpec peek{1, [](const PathPrefix& x, std::size_t k, double, double* out) { out[0] = x(k + 1); }};
  CHECK_THROWS_AS(euler_semimartingale(peek, w, w), ModelError);
}

TEST_CASE("solver output is adapted: truncated drivers give the same prefix") {
  TimeGrid g(1.0, 32);
  auto w = brownian(g, 1, 20, 77);
  SemimartingaleSpec h{1, [](const PathPrefix& x, std::size_t k, double, double* out) {
                         double run_max = 0;
                         for (std::size_t i = 0; i <= k; ++i) run_max = std::max(run_max, x(i));
                         out[0] = 0.1 * run_max;
                         out[1] = 1.0 / (1.0 + x(k) * x(k));
                       }};
  auto v = time_and(w);
  auto x = euler_semimartingale(h, constant(g, 20, 0.0), v);
  for (std::size_t cut : {5u, 17u}) {
    auto edited = v;
    for (std::size_t p = 0; p < 20; ++p)
      for (std::size_t k = cut + 1; k < g.points(); ++k) edited(p, k, 1) = 1e3 * static_cast<double>(k);
    auto y = euler_semimartingale(h, constant(g, 20, 0.0), edited);
    for (std::size_t p = 0; p < 20; ++p)
      for (std::size_t k = 0; k <= cut; ++k) CHECK(x(p, k) == y(p, k));
  }
}

TEST_CASE("time change with constant rates") {
  TimeGrid g(1.0, 16);
  TimeChangeSpec spec;
  spec.dim = 2;
  spec.clocks = 2;
  const double rates[2] = {0.5, 2.0};
  spec.beta = [&](std::size_t k, const double*) { return rates[k]; };
  spec.zeta = {{1.0, 0.0}, {1.0, -1.0}};
  spec.drift = [](const double*, double* out) {
    out[0] = 0.25;
    out[1] = -1.0;
  };
  TimeChangeResult out{PathEnsemble(g, 1, 2), PathEnsemble(g, 1, 2), PathEnsemble(g, 1, 2)};
  std::vector<BrownianOracle> w{BrownianOracle(3, 0, purpose::clock(0)), BrownianOracle(3, 0, purpose::clock(1))};
  time_change_path(spec, {1.0, 2.0}, w, out, 0);
  for (std::size_t k = 0; k < g.points(); ++k) {
    const double t = g.t(k);
    CHECK(out.tau(0, k, 0) == doctest::Approx(rates[0] * t).epsilon(1e-14));
    CHECK(out.tau(0, k, 1) == doctest::Approx(rates[1] * t).epsilon(1e-14));
    // Cached oracle values at the clocks the scheme actually reached.
    const double w0 = w[0].at(out.tau(0, k, 0)), w1 = w[1].at(out.tau(0, k, 1));
    CHECK(out.x(0, k, 0) == doctest::Approx(1.0 + w0 + w1 + 0.25 * t).epsilon(1e-14));
    CHECK(out.x(0, k, 1) == doctest::Approx(2.0 - w1 - t).epsilon(1e-14));
    if (k > 0) {
      CHECK(out.tau(0, k, 0) >= out.tau(0, k - 1, 0));
      CHECK(out.tau(0, k, 1) >= out.tau(0, k - 1, 1));
    }
  }
}

TEST_CASE("time change covariance with constant rates") {
  // Cov X(1) = sum_k b_k zeta_k zeta_k^T = 0.5 [1 0; 0 0] + 2 [1 -1; -1 1] = [2.5 -2; -2 2].
  TimeGrid g(1.0, 8);
  TimeChangeSpec spec;
  spec.dim = 2;
  spec.clocks = 2;
  spec.beta = [](std::size_t k, const double*) { return k == 0 ? 0.5 : 2.0; };
  spec.zeta = {{1.0, 0.0}, {1.0, -1.0}};
  const std::size_t paths = 20000;
  auto r = time_change_euler(spec, {0.0, 0.0}, g, paths, 9);
  double s00 = 0, s01 = 0, s11 = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    const double a = r.x(p, 8, 0), b = r.x(p, 8, 1);
    s00 += a * a;
    s01 += a * b;
    s11 += b * b;
  }
  s00 /= paths;
  s01 /= paths;
  s11 /= paths;
  // Gaussian product moments: Var(XY) = s_xx s_yy + s_xy^2.
  auto se = [&](double sxx, double syy, double sxy) { return std::sqrt((sxx * syy + sxy * sxy) / paths); };
  CHECK(std::abs(s00 - 2.5) <= 4 * se(2.5, 2.5, 2.5));
  CHECK(std::abs(s01 + 2.0) <= 4 * se(2.5, 2.0, -2.0));
  CHECK(std::abs(s11 - 2.0) <= 4 * se(2.0, 2.0, 2.0));
}

TEST_CASE("time change rejects negative rates") {
  TimeGrid g(1.0, 4);
  TimeChangeSpec spec;
  spec.beta = [](std::size_t, const double* x) { return x[0] - 10.0; };
  spec.zeta = {{1.0}};
  CHECK_THROWS_AS(time_change_euler(spec, {0.0}, g, 1, 1), ModelError);
}

TEST_CASE("McKean-Vlasov forced recursion") {
  TimeGrid g(1.0, 10);
  const double beta = 0.3;
  McKeanVlasovSpec spec;
  spec.sigma = [](const double*, const EmpiricalLaw&, double* out) { out[0] = 0; };
  spec.drift = [beta](const double*, const EmpiricalLaw& law, double* out) { out[0] = beta * law.mean(); };
  spec.initial = [](std::size_t, Stream&, double* out) { out[0] = 2.0; };
  auto x = mckean_vlasov(spec, 5, g, 1);
  double expected = 2.0;
  for (std::size_t k = 0; k < g.points(); ++k) {
    for (std::size_t i = 0; i < 5; ++i) CHECK(x(i, k) == doctest::Approx(expected).epsilon(1e-14));
    expected *= 1 + beta * g.dt(k);
  }
  CHECK_THROWS_AS(mckean_vlasov(spec, 1, g, 1), PreconditionError);
}

TEST_CASE("McKean-Vlasov without interaction is Brownian") {
  TimeGrid g(1.0, 16);
  McKeanVlasovSpec spec;
  spec.sigma = [](const double*, const EmpiricalLaw&, double* out) { out[0] = 1; };
  spec.drift = [](const double*, const EmpiricalLaw&, double* out) { out[0] = 0; };
  spec.initial = [](std::size_t, Stream&, double* out) { out[0] = 0; };
  auto x = mckean_vlasov(spec, 6, g, 42);
  auto w = brownian(g, 1, 6, 42);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < g.points(); ++k) CHECK(x(i, k) == w(i, k));
}

TEST_CASE("McKean-Vlasov linear mean") {
  // b(x, mu) = a x + c mean(mu), sigma = 0.5, x0 ~ N(1, 1): m' = (a + c) m.
  const double a = -0.4, c = 0.9, rate = a + c;
  TimeGrid g(1.0, 64);
  const std::size_t n = 5000;
  McKeanVlasovSpec spec;
  spec.sigma = [](const double*, const EmpiricalLaw&, double* out) { out[0] = 0.5; };
  spec.drift = [&](const double* x, const EmpiricalLaw& law, double* out) { out[0] = a * x[0] + c * law.mean(); };
  spec.initial = [](std::size_t, Stream& s, double* out) { out[0] = 1.0 + s.normal(); };
  auto x = mckean_vlasov(spec, n, g, 5);
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += x(i, g.steps());
    sq += x(i, g.steps()) * x(i, g.steps());
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  const double dt = g.dt(0);
  const double bias = rate * rate * dt / 2 * std::exp(std::abs(rate));
  CHECK(std::abs(mean - std::exp(rate)) <= 4 * (se + bias));
}

TEST_CASE("d_m metric") {
  TimeGrid g(2.0, 4);
  PathEnsemble e(g, 3, 1);
  for (std::size_t k = 0; k < g.points(); ++k) {
    e(1, k) = 0.25;
    e(2, k) = -3.0;
  }
  CHECK(dm_metric(e.path(0), e.path(0), g) == 0);
  CHECK(dm_metric(e.path(0), e.path(1), g) == 2.0 * 0.25);
  CHECK(dm_metric(e.path(0), e.path(2), g) == 2.0);
  CHECK(dm_metric(e.path(1), e.path(2), g) == dm_metric(e.path(2), e.path(1), g));
  CHECK_THROWS_AS(dm_metric(e.path(0), e.path(1), TimeGrid(2.0, 8)), PreconditionError);
}

TEST_CASE("d_m triangle inequality") {
  TimeGrid g(1.0, 12);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 0.7);
  PathEnsemble e(g, 3, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t k = 0; k < g.points(); ++k)
        for (std::size_t j = 0; j < 2; ++j) e(p, k, j) = z(rng);
    const double xy = dm_metric(e.path(0), e.path(1), g);
    const double yz = dm_metric(e.path(1), e.path(2), g);
    const double xz = dm_metric(e.path(0), e.path(2), g);
    CHECK(xz <= xy + yz + 1e-15);
  }
}
