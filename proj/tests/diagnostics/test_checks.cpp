#include "compatlab/diagnostics/controls.hpp"

#include "doctest.h"

#include <cmath>
#include <sstream>

using namespace compatlab;
using namespace compatlab::diagnostics;
using namespace compatlab::paths;

namespace {

ItoSpec mean_reverting() {
  ItoSpec spec;
  spec.sigma = [](const double* x, double* out) { out[0] = 1 + 0.5 * std::cos(x[0]); };
  spec.drift = [](const double* x, double* out) { out[0] = -x[0]; };
  return spec;
}

ItoSpec gbm() {
  ItoSpec spec;
  spec.sigma = [](const double* x, double* out) { out[0] = 0.4 * x[0]; };
  spec.drift = [](const double* x, double* out) { out[0] = 0.05 * x[0]; };
  return spec;
}

std::vector<StructureEntry> temporal(std::initializer_list<double> alphas) {
  std::vector<StructureEntry> s;
  for (double a : alphas) s.push_back({"", a});
  return s;
}

PathEnsemble squared(const PathEnsemble& w) {
  PathEnsemble m = w;
  for (std::size_t p = 0; p < w.paths(); ++p)
    for (std::size_t k = 0; k < w.points(); ++k) m(p, k) = w(p, k) * w(p, k);
  return m;
}

}  // namespace

TEST_CASE("an adapted Euler solution is not rejected") {
  auto w = brownian(TimeGrid(1.0, 32), 1, 4000, 21);
  auto x = euler_ito(mean_reverting(), {0.2}, w);
  auto r = compat_test(x, w, temporal({0.25, 0.5, 0.75}), default_test_functions(1), TestConfig{});
  CHECK(r.entries.size() == 12);
  CHECK(r.multiplier == doctest::Approx(bonferroni_multiplier(3, 12)));
  CHECK_FALSE(r.rejected);
}

TEST_CASE("nesting holds up to estimation noise over seeds") {
  // The bootstrap SE covers evaluation noise only. The larger model also pays
  // an overfitting excess of about q sigma^2 / n_train for q extra features,
  // roughly sqrt(q) / 2 standard errors, so an entry exceeds the 3 SE margin
  // with probability near Phi(sqrt(q) / 2 - 3). With q = 9 that is 7%.
  std::size_t entries = 0, violations = 0, negative = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto w = brownian(TimeGrid(1.0, 16), 1, 2000, seed);
    auto x = euler_ito(mean_reverting(), {0.2}, w);
    TestConfig cfg;
    cfg.seed = seed;
    for (const auto& e : compat_test(x, w, temporal({0.25, 0.5, 0.75}), default_test_functions(1), cfg).entries) {
      ++entries;
      violations += e.mse_xy > e.mse_y + 3 * e.se;
      negative += e.gap < 0;
      CHECK(e.mse_y >= 0);
      CHECK(e.mse_xy >= 0);
    }
  }
  CHECK(entries == 600);
  CHECK(violations <= 60);
  CHECK(negative > 300);  // negative gaps are reported, never clamped
}

TEST_CASE("a semimartingale Euler solution is not rejected") {
  TimeGrid g(1.0, 32);
  auto w = brownian(g, 1, 4000, 5);
  PathEnsemble u(g, w.paths(), 1, w.provenance());
  for (std::size_t p = 0; p < u.paths(); ++p)
    for (std::size_t k = 0; k < g.points(); ++k) u(p, k) = 0.5 * g.t(k);
  SemimartingaleSpec spec;
  spec.integrand = [](const PathPrefix& x, std::size_t k, double, double* out) { out[0] = std::sin(x(k)) + 1.2; };
  auto x = euler_semimartingale(spec, u, w);
  CHECK_FALSE(compat_test(x, w, temporal({0.3, 0.6}), default_test_functions(1), TestConfig{}).rejected);
}

TEST_CASE("a time-reversed driver is rejected") {
  auto w = brownian(TimeGrid(1.0, 32), 1, 4000, 22);
  auto r = compat_test(time_reversed(w), w, temporal({0.25, 0.5}), default_test_functions(1), TestConfig{});
  CHECK(r.rejected);
}

TEST_CASE("the anticipating control is rejected under both structures") {
  auto w = brownian(TimeGrid(1.0, 32), 1, 4000, 23);
  auto x = anticipating_control(w);
  CHECK(compat_test(x, w, temporal({0.5}), default_test_functions(1), TestConfig{}).rejected);
  StructureEntry rc{"rc", 0.5, StructureEntry::Kind::rc, 0.2, 0.1, {"id", "atan"}};
  CHECK(compat_test(x, w, {rc}, default_test_functions(1), TestConfig{}).rejected);
  CHECK_FALSE(compat_test(euler_ito(mean_reverting(), {0.0}, w), w, {rc}, default_test_functions(1), TestConfig{})
                  .rejected);
}

TEST_CASE("Euler refinements stay compatible along the ladder") {
  auto fine = brownian(TimeGrid(1.0, 256), 1, 4000, 24);
  for (std::size_t n : {16u, 32u, 64u, 128u, 256u}) {
    CAPTURE(n);
    auto w = coarsen(fine, n);
    auto x = euler_ito(mean_reverting(), {0.0}, w);
    CHECK_FALSE(compat_test(x, w, temporal({0.5}), default_test_functions(1), TestConfig{}).rejected);
  }
}

TEST_CASE("swapping window directions changes the report") {
  auto w = brownian(TimeGrid(1.0, 32), 1, 2000, 25);
  auto x = euler_ito(mean_reverting(), {0.0}, w);
  std::vector<Basis> g{basis("id")};
  Eigen::VectorXd h(2000);
  for (std::size_t p = 0; p < 2000; ++p) h(p) = std::tanh(w(p, 32) - w(p, 16));
  auto right = l2_gap(h, features_rc(x, 0.5, 0.2, 0.1, g, Window::backward, 4),
                      features_rc(w, 0.5, 0.2, 0.1, g, Window::forward, 4), TestConfig{});
  auto swapped = l2_gap(h, features_rc(x, 0.5, 0.2, 0.1, g, Window::forward, 4),
                        features_rc(w, 0.5, 0.2, 0.1, g, Window::backward, 4), TestConfig{});
  CHECK(right.gap != swapped.gap);
  CHECK(right.mse_y != swapped.mse_y);
}

TEST_CASE("provenance mismatches are hard errors") {
  TimeGrid g(1.0, 16);
  auto w = brownian(g, 1, 200, 1);
  auto other = brownian(g, 1, 200, 2);
  auto h = default_test_functions(1);
  CHECK_THROWS_AS(compat_test(other, w, temporal({0.5}), h, TestConfig{}), ProvenanceError);
  CHECK_THROWS_AS(compat_test(brownian(TimeGrid(1.0, 8), 1, 200, 1), w, temporal({0.5}), h, TestConfig{}),
                  ProvenanceError);
  CHECK_THROWS_AS(martingale_test(w, other, w, 0.25, 0.5, TestConfig{}), ProvenanceError);
}

TEST_CASE("reports are deterministic and carry provenance") {
  auto w = brownian(TimeGrid(1.0, 16), 1, 400, 77);
  w.provenance().spec_hash = "abc";
  auto x = euler_ito(mean_reverting(), {0.0}, w);
  TestConfig cfg;
  cfg.seed = 5;
  auto a = compat_test(x, w, temporal({0.5, 0.75}), default_test_functions(1), cfg);
  auto b = compat_test(x, w, temporal({0.5, 0.75}), default_test_functions(1), cfg);
  std::ostringstream ca, cb;
  write_csv(ca, a);
  write_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(ca.str().rfind("alpha,h_id,mse_y,mse_xy,gap,se,ci_lo,ci_hi,decision\n", 0) == 0);
  auto j = to_json(a);
  CHECK(j["x"]["seed"] == 77);
  CHECK(j["y"]["spec_hash"] == "abc");
  CHECK(j["entries"].size() == 8);
  CHECK(j["entries"][0]["alpha"] == "0.5");
}

TEST_CASE("martingale test") {
  TimeGrid g(1.0, 32);
  auto w = brownian(g, 1, 4000, 31);
  auto x = euler_ito(mean_reverting(), {0.0}, w);

  SUBCASE("a Brownian motion against a compatible X") {
    auto r = martingale_test(w, x, w, 0.25, 0.75, TestConfig{});
    CHECK_FALSE(r.reject);
  }
  SUBCASE("W squared has a deterministic drift") {
    auto r = martingale_test(squared(w), x, w, 0.25, 0.75, TestConfig{});
    CHECK(r.reject);
    CHECK(r.gain > 0);
  }
  SUBCASE("a localized Brownian motion") {
    std::vector<double> stop(w.paths(), kNever);
    for (std::size_t p = 0; p < w.paths(); ++p)
      for (std::size_t k = 0; k < g.points(); ++k)
        if (std::abs(w(p, k)) >= 0.5) {
          stop[p] = g.t(k);
          break;
        }
    CHECK_FALSE(martingale_test(w, x, w, 0.25, 0.75, TestConfig{}, &stop).reject);
    CHECK(martingale_test(squared(w), x, w, 0.25, 0.75, TestConfig{}, &stop).reject);
  }
  SUBCASE("X = W(T) sees the bridge drift") {
    const double s = 0.25, t = 0.75;
    auto r = martingale_test(w, anticipating_control(w), w, s, t, TestConfig{});
    CHECK(r.reject);
    // E[W(t) - W(s) | W(T), F_s] = (t - s)(W(T) - W(s)) / (T - s).
    Eigen::VectorXd d(4000);
    Eigen::MatrixXd z(4000, 1);
    for (std::size_t p = 0; p < 4000; ++p) {
      d(p) = w(p, 24) - w(p, 8);
      z(p, 0) = w(p, 32) - w(p, 8);
    }
    auto fit = ols_fit(d, z);
    CHECK(std::abs(fit.coef(1) - (t - s) / (1 - s)) < 3 * fit.se(1));
  }
  CHECK_THROWS_AS(martingale_test(w, x, w, 0.5, 0.5, TestConfig{}), PreconditionError);
}

TEST_CASE("strong copies of deterministic schemes coincide") {
  auto w = brownian(TimeGrid(1.0, 32), 1, 300, 41);
  AuxSolver euler = [](const PathEnsemble& y, std::size_t p, Stream&, double* out) {
    out[0] = 0.1;
    for (std::size_t k = 0; k < y.grid().steps(); ++k)
      out[k + 1] = out[k] - out[k] * y.grid().dt(k) + (1 + 0.5 * std::cos(out[k])) * (y(p, k + 1) - y(p, k));
  };
  auto r = strong_copy_test(euler, w, 1, 3);
  CHECK(r.statistic == 0);
  CHECK(r.disagreement == 0);

  // X = F(Y) after drawing auxiliary noise it never uses.
  AuxSolver explicit_map = [](const PathEnsemble& y, std::size_t p, Stream& aux, double* out) {
    aux.normal();
    for (std::size_t k = 0; k < y.points(); ++k) out[k] = y(p, k) * y(p, k);
  };
  CHECK(strong_copy_test(explicit_map, w, 1, 3).statistic == 0);
}

TEST_CASE("Tanaka copies disagree by twice the running maximum") {
  const std::size_t paths = 4000;
  TimeGrid g(1.0, 128);
  auto b = brownian(g, 1, paths, 51);
  auto r = strong_copy_test(tanaka_solver(), tanaka_driver(b), 1, 9);

  // Oracle for E sup |B| on the same grid, from an independent ensemble.
  auto ref = brownian(g, 1, 20000, 52);
  double oracle = 0;
  for (std::size_t p = 0; p < ref.paths(); ++p) {
    double sup = 0;
    for (std::size_t k = 0; k < g.points(); ++k) sup = std::max(sup, std::abs(ref(p, k)));
    oracle += sup;
  }
  oracle /= static_cast<double>(ref.paths());

  CHECK(std::abs(r.disagreement - 0.5) < 4 * std::sqrt(0.25 / paths));
  CHECK(std::abs(r.conditional / (2 * oracle) - 1) < 0.1);
  CHECK(std::abs(r.statistic / oracle - 1) < 0.1);

  // Each copy is +B or -B.
  auto x = solve_with_aux(tanaka_solver(), tanaka_driver(b), 1, 9, 0);
  for (std::size_t p = 0; p < 50; ++p) {
    const double s = x(p, 1) / b(p, 1);
    for (std::size_t k = 1; k < g.points(); ++k) CHECK(x(p, k) == doctest::Approx(s * b(p, k)).epsilon(1e-9));
  }
}

TEST_CASE("uniqueness probes") {
  auto fine = brownian(TimeGrid(1.0, 512), 1, 1000, 61);
  const std::vector<std::size_t> ladder{16, 32, 64, 128, 256};

  auto same = uniqueness_probe(euler_ladder(gbm(), {1.0}), euler_ladder(gbm(), {1.0}), fine, ladder);
  CHECK(same.all_zero);
  CHECK(std::isnan(same.order));

  // Euler at n against Euler at 2n on the same driver.
  LadderSolver doubled = [](const PathEnsemble& w, std::size_t n) { return euler_ladder(gbm(), {1.0})(w, 2 * n); };
  auto euler = uniqueness_probe(euler_ladder(gbm(), {1.0}), doubled, fine, ladder);
  CHECK(euler.order >= 0.35);
  CHECK(euler.order <= 0.65);
  for (std::size_t i = 1; i < euler.rows.size(); ++i) CHECK(euler.rows[i].error < euler.rows[i - 1].error);

  // Tanaka copies with independent coins do not approach each other.
  auto driver = tanaka_driver(fine);
  auto copy = [](std::uint32_t index) -> LadderSolver {
    return [index](const PathEnsemble& y, std::size_t n) {
      return solve_with_aux(tanaka_solver(), coarsen(y, n), 1, 7, index);
    };
  };
  auto tanaka = uniqueness_probe(copy(0), copy(1), driver, ladder);
  CHECK(std::abs(tanaka.order) < 0.15);
  for (const auto& row : tanaka.rows) CHECK(row.error > 0.5);

  std::ostringstream csv;
  write_csv(csv, euler);
  CHECK(csv.str().rfind("steps,error,se\n16,", 0) == 0);
  CHECK(to_json(same)["order"].is_null());
}
