#include "compatlab/diagnostics/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace compatlab::diagnostics {

using paths::PathEnsemble;
using paths::PathView;
using paths::TimeGrid;

namespace {

double sign(double v) { return (v > 0) - (v < 0); }
double clip(double v) { return std::clamp(v, -1.0, 1.0); }

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double distance(const double* a, const double* b, std::size_t dims) {
  double s = 0;
  for (std::size_t j = 0; j < dims; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

struct MeanSe {
  double mean = 0, se = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return r;
  double ss = 0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return r;
}

FeatureMatrix side_features(const PathEnsemble& e, const StructureEntry& s, Window side, std::size_t m) {
  if (s.kind == StructureEntry::Kind::temporal) return features_temporal(e, s.alpha, m);
  std::vector<Basis> g;
  for (const auto& id : s.basis) g.push_back(basis(id));
  return features_rc(e, s.alpha, s.eps, s.window, g, side, m);
}

}  // namespace

std::vector<TestFunction> default_test_functions(std::size_t dims) {
  std::vector<TestFunction> out;
  for (std::size_t j = 0; j < dims; ++j) {
    const std::string suffix = dims == 1 ? "" : "[" + std::to_string(j) + "]";
    auto terminal = [j](const PathView& y, const TimeGrid& g, double alpha) {
      return y(g.steps(), j) - y(g.floor_index(alpha), j);
    };
    auto mid = [j](const PathView& y, const TimeGrid& g, double alpha) {
      return y(g.floor_index((alpha + g.horizon()) / 2), j) - y(g.floor_index(alpha), j);
    };
    out.push_back({"sign_terminal" + suffix, [=](auto& y, auto& g, double a) { return sign(terminal(y, g, a)); }});
    out.push_back({"clip_terminal" + suffix, [=](auto& y, auto& g, double a) { return clip(terminal(y, g, a)); }});
    out.push_back({"sign_mid" + suffix, [=](auto& y, auto& g, double a) { return sign(mid(y, g, a)); }});
    out.push_back({"clip_mid" + suffix, [=](auto& y, auto& g, double a) { return clip(mid(y, g, a)); }});
  }
  return out;
}

GapReport compat_test(const PathEnsemble& x, const PathEnsemble& y, const std::vector<StructureEntry>& structure,
                      const std::vector<TestFunction>& hs, const TestConfig& cfg) {
  paths::require_same_provenance(x, y);
  cfg.validate();
  if (structure.empty() || hs.empty()) throw PreconditionError("compatibility test needs indices and test functions");
  GapReport r;
  r.x_provenance = x.provenance();
  r.y_provenance = y.provenance();
  r.multiplier = bonferroni_multiplier(cfg.multiplier, structure.size() * hs.size());
  std::uint32_t stream = 0;
  for (const auto& s : structure) {
    const FeatureMatrix fx = side_features(x, s, Window::backward, cfg.feature_count);
    const FeatureMatrix fy = side_features(y, s, Window::forward, cfg.feature_count);
    for (const auto& h : hs) {
      Eigen::VectorXd hv(static_cast<Eigen::Index>(y.paths()));
      for (std::size_t p = 0; p < y.paths(); ++p) hv(static_cast<Eigen::Index>(p)) = h.h(y.path(p), y.grid(), s.alpha);
      GapEntry e = l2_gap(hv, fx, fy, cfg, r.multiplier, stream);
      stream += static_cast<std::uint32_t>(cfg.bootstrap);
      e.alpha = s.label.empty() ? number(s.alpha) : s.label;
      e.h_id = h.id;
      r.rejected = r.rejected || e.reject;
      r.entries.push_back(std::move(e));
    }
  }
  return r;
}

MartingaleReport martingale_test(const PathEnsemble& m, const PathEnsemble& x, const PathEnsemble& y, double s,
                                 double t, const TestConfig& cfg, const std::vector<double>* stop) {
  paths::require_same_provenance(m, x);
  paths::require_same_provenance(m, y);
  cfg.validate();
  if (!(s < t)) throw PreconditionError("martingale test needs s < t");
  if (stop && stop->size() != m.paths()) throw PreconditionError("one stopping time per path is required");
  const auto& grid = m.grid();
  const auto rows = static_cast<Eigen::Index>(m.paths());
  Eigen::VectorXd d(rows);
  for (std::size_t p = 0; p < m.paths(); ++p) {
    const double cap = stop ? (*stop)[p] : std::numeric_limits<double>::infinity();
    d(static_cast<Eigen::Index>(p)) = m(p, grid.floor_index(std::min(t, cap))) - m(p, grid.floor_index(std::min(s, cap)));
  }
  const FeatureMatrix fy = features_temporal(y, s, cfg.feature_count);
  const FeatureMatrix fx = features_temporal(x, s, cfg.feature_count);
  FeatureMatrix raw(rows, fy.cols() + fx.cols());
  raw << fy, fx;
  const FeatureMatrix f = polynomial(raw, cfg.degree);

  const auto train = static_cast<Eigen::Index>(std::floor(cfg.split * static_cast<double>(rows)));
  const Eigen::Index eval = rows - train;
  if (eval < 50 || train < 1) throw PreconditionError("the split must leave at least 50 evaluation rows");
  RidgeFit fit(f.topRows(train), d.head(train), cfg.lambda);
  const Eigen::VectorXd de = d.tail(eval);
  const Eigen::VectorXd resid = de - fit.predict(f.bottomRows(eval));
  const Eigen::VectorXd diff = de.array().square() - resid.array().square();

  MartingaleReport r;
  r.s = s;
  r.t = t;
  r.mse_null = de.squaredNorm() / static_cast<double>(eval);
  r.mse_fit = resid.squaredNorm() / static_cast<double>(eval);
  r.gain = diff.mean();
  r.se = bootstrap_se(diff, cfg.bootstrap, cfg.seed);
  r.reject = r.gain > cfg.multiplier * r.se;
  r.degenerate = fit.degenerate();
  return r;
}

StrongCopyReport strong_copy_test(const AuxSolver& solver, const PathEnsemble& driver, std::size_t dims,
                                  std::uint64_t seed) {
  if (dims == 0) throw PreconditionError("solution dimension must be positive");
  const std::size_t points = driver.points();
  std::vector<double> a(points * dims), b(points * dims), all, disagreeing;
  for (std::size_t p = 0; p < driver.paths(); ++p) {
    paths::Stream s0(seed, static_cast<std::uint32_t>(p), paths::purpose::aux(0));
    paths::Stream s1(seed, static_cast<std::uint32_t>(p), paths::purpose::aux(1));
    solver(driver, p, s0, a.data());
    solver(driver, p, s1, b.data());
    double sup = 0;
    for (std::size_t k = 0; k < points; ++k) sup = std::max(sup, distance(&a[k * dims], &b[k * dims], dims));
    all.push_back(sup);
    if (sup > 0) disagreeing.push_back(sup);
  }
  StrongCopyReport r;
  r.paths = driver.paths();
  const auto total = mean_se(all), cond = mean_se(disagreeing);
  r.statistic = total.mean;
  r.se = total.se;
  r.disagreement = all.empty() ? 0 : static_cast<double>(disagreeing.size()) / static_cast<double>(all.size());
  r.conditional = cond.mean;
  r.conditional_se = cond.se;
  return r;
}

ProbeTable uniqueness_probe(const LadderSolver& a, const LadderSolver& b, const PathEnsemble& driver,
                            const std::vector<std::size_t>& ladder) {
  if (ladder.empty()) throw PreconditionError("ladder needs at least one step count");
  ProbeTable table;
  for (std::size_t n : ladder) {
    const PathEnsemble xa = a(driver, n), xb = b(driver, n);
    if (xa.paths() != xb.paths() || xa.dims() != xb.dims() || xa.grid().horizon() != xb.grid().horizon())
      throw PreconditionError("ladder solutions are not comparable");
    const std::size_t coarse = std::min(xa.grid().steps(), xb.grid().steps());
    if (xa.grid().steps() % coarse != 0 || xb.grid().steps() % coarse != 0)
      throw PreconditionError("ladder grids must be nested");
    const std::size_t sa = xa.grid().steps() / coarse, sb = xb.grid().steps() / coarse;
    std::vector<double> sups(xa.paths());
    for (std::size_t p = 0; p < xa.paths(); ++p) {
      double sup = 0;
      for (std::size_t k = 0; k <= coarse; ++k) sup = std::max(sup, distance(xa.row(p, k * sa), xb.row(p, k * sb), xa.dims()));
      sups[p] = sup;
    }
    const auto ms = mean_se(sups);
    table.rows.push_back({n, ms.mean, ms.se});
  }
  table.all_zero = std::all_of(table.rows.begin(), table.rows.end(), [](const ProbeRow& r) { return r.error == 0; });
  const bool positive = std::all_of(table.rows.begin(), table.rows.end(), [](const ProbeRow& r) { return r.error > 0; });
  table.order = std::numeric_limits<double>::quiet_NaN();
  if (positive && table.rows.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& r : table.rows) {
      mx += std::log(static_cast<double>(r.steps));
      my += std::log(r.error);
    }
    mx /= static_cast<double>(table.rows.size());
    my /= static_cast<double>(table.rows.size());
    double sxy = 0, sxx = 0;
    for (const auto& r : table.rows) {
      const double dx = std::log(static_cast<double>(r.steps)) - mx;
      sxy += dx * (std::log(r.error) - my);
      sxx += dx * dx;
    }
    if (sxx > 0) table.order = -sxy / sxx;
  }
  return table;
}

void write_csv(std::ostream& out, const GapReport& r) {
  out << "alpha,h_id,mse_y,mse_xy,gap,se,ci_lo,ci_hi,decision\n";
  for (const auto& e : r.entries)
    out << e.alpha << ',' << e.h_id << ',' << number(e.mse_y) << ',' << number(e.mse_xy) << ',' << number(e.gap)
        << ',' << number(e.se) << ',' << number(e.ci_lo) << ',' << number(e.ci_hi) << ','
        << (e.reject ? "reject" : "pass") << '\n';
}

nlohmann::json to_json(const GapReport& r) {
  auto prov = [](const paths::Provenance& p) {
    return nlohmann::json{{"seed", p.seed}, {"spec_hash", p.spec_hash}, {"tag", p.tag}};
  };
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"alpha", e.alpha},
                       {"h_id", e.h_id},
                       {"mse_y", e.mse_y},
                       {"mse_xy", e.mse_xy},
                       {"gap", e.gap},
                       {"se", e.se},
                       {"ci_lo", e.ci_lo},
                       {"ci_hi", e.ci_hi},
                       {"decision", e.reject ? "reject" : "pass"},
                       {"degenerate", e.degenerate}});
  return {{"multiplier", r.multiplier},
          {"rejected", r.rejected},
          {"x", prov(r.x_provenance)},
          {"y", prov(r.y_provenance)},
          {"entries", entries}};
}

void write_csv(std::ostream& out, const ProbeTable& t) {
  out << "steps,error,se\n";
  for (const auto& r : t.rows) out << r.steps << ',' << number(r.error) << ',' << number(r.se) << '\n';
}

nlohmann::json to_json(const ProbeTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"steps", r.steps}, {"error", r.error}, {"se", r.se}});
  nlohmann::json order = std::isnan(t.order) ? nlohmann::json(nullptr) : nlohmann::json(t.order);
  return {{"rows", rows}, {"order", order}, {"all_zero", t.all_zero}};
}

nlohmann::json to_json(const MartingaleReport& r) {
  return {{"s", r.s},         {"t", r.t},   {"mse_null", r.mse_null},
          {"mse_fit", r.mse_fit}, {"gain", r.gain}, {"se", r.se},
          {"decision", r.reject ? "reject" : "pass"}, {"degenerate", r.degenerate}};
}

nlohmann::json to_json(const StrongCopyReport& r) {
  return {{"paths", r.paths},           {"statistic", r.statistic},   {"se", r.se},
          {"disagreement", r.disagreement}, {"conditional", r.conditional}, {"conditional_se", r.conditional_se}};
}

}  // namespace compatlab::diagnostics
