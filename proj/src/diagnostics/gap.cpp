#include "compatlab/diagnostics/gap.hpp"

#include "compatlab/paths/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace compatlab::diagnostics {

void TestConfig::validate() const {
  if (!(lambda > 0)) throw PreconditionError("ridge penalty must be positive");
  if (!(split > 0 && split < 1)) throw PreconditionError("train fraction must lie in (0, 1)");
  if (bootstrap < 100) throw PreconditionError("at least 100 bootstrap replicates are required");
  if (!(multiplier > 0)) throw PreconditionError("decision multiplier must be positive");
  if (degree == 0) throw PreconditionError("polynomial degree must be at least 1");
  if (feature_count == 0) throw PreconditionError("feature count must be positive");
}

RidgeFit::RidgeFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
  const double n = static_cast<double>(x.rows());
  intercept_ = y.mean();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double m = x.col(c).mean();
    const double sd = std::sqrt((x.col(c).array() - m).square().sum() / n);
    if (sd > 1e-12 * std::max(1.0, std::abs(m))) kept_.push_back(c);
  }
  if (kept_.empty()) return;
  const auto k = static_cast<Eigen::Index>(kept_.size());
  mean_.resize(k);
  scale_.resize(k);
  Eigen::MatrixXd z(x.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto col = x.col(kept_[static_cast<std::size_t>(i)]);
    mean_(i) = col.mean();
    scale_(i) = std::sqrt((col.array() - mean_(i)).square().sum() / n);
    z.col(i) = (col.array() - mean_(i)) / scale_(i);
  }
  Eigen::MatrixXd gram = z.transpose() * z;
  gram.diagonal().array() += lambda * n;
  beta_ = gram.ldlt().solve(z.transpose() * (y.array() - intercept_).matrix());
}

Eigen::VectorXd RidgeFit::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(x.rows(), intercept_);
  for (std::size_t i = 0; i < kept_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out.array() += beta_(ii) * (x.col(kept_[i]).array() - mean_(ii)) / scale_(ii);
  }
  return out;
}

double bootstrap_se(const Eigen::VectorXd& d, std::size_t replicates, std::uint64_t seed, std::uint32_t first_stream) {
  const auto n = static_cast<std::uint64_t>(d.size());
  if (n == 0 || replicates < 2) throw PreconditionError("bootstrap needs data and at least two replicates");
  std::vector<double> means(replicates);
  for (std::size_t b = 0; b < replicates; ++b) {
    paths::Stream s(seed, first_stream + static_cast<std::uint32_t>(b), paths::purpose::bootstrap);
    double sum = 0;
    for (std::uint64_t i = 0; i < n; ++i) sum += d(static_cast<Eigen::Index>((s.next_u32() * n) >> 32));
    means[b] = sum / static_cast<double>(n);
  }
  double m = 0;
  for (double v : means) m += v;
  m /= static_cast<double>(replicates);
  double ss = 0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(replicates - 1));
}

GapEntry l2_gap(const Eigen::VectorXd& h, const FeatureMatrix& raw_x, const FeatureMatrix& raw_y,
                const TestConfig& cfg, double multiplier, std::uint32_t first_stream) {
  cfg.validate();
  const Eigen::Index rows = h.size();
  if (raw_x.rows() != rows || raw_y.rows() != rows) throw PreconditionError("feature and response row counts differ");
  const auto train = static_cast<Eigen::Index>(std::floor(cfg.split * static_cast<double>(rows)));
  const Eigen::Index eval = rows - train;
  if (eval < 50 || train < 1) throw PreconditionError("the split must leave at least 50 evaluation rows");

  FeatureMatrix joint(rows, raw_y.cols() + raw_x.cols());
  joint << raw_y, raw_x;
  const FeatureMatrix fy = polynomial(raw_y, cfg.degree);
  const FeatureMatrix fxy = polynomial(joint, cfg.degree);

  RidgeFit small(fy.topRows(train), h.head(train), cfg.lambda);
  RidgeFit large(fxy.topRows(train), h.head(train), cfg.lambda);
  const Eigen::VectorXd ey = h.tail(eval) - small.predict(fy.bottomRows(eval));
  const Eigen::VectorXd exy = h.tail(eval) - large.predict(fxy.bottomRows(eval));
  const Eigen::VectorXd d = ey.array().square() - exy.array().square();

  GapEntry g;
  g.mse_y = ey.squaredNorm() / static_cast<double>(eval);
  g.mse_xy = exy.squaredNorm() / static_cast<double>(eval);
  g.gap = d.mean();
  g.se = bootstrap_se(d, cfg.bootstrap, cfg.seed, first_stream);
  g.ci_lo = g.gap - 1.96 * g.se;
  g.ci_hi = g.gap + 1.96 * g.se;
  g.reject = g.gap > multiplier * g.se;
  g.degenerate = small.degenerate() || large.degenerate();
  return g;
}

GapEntry l2_gap(const Eigen::VectorXd& h, const FeatureMatrix& raw_x, const FeatureMatrix& raw_y,
                const TestConfig& cfg) {
  return l2_gap(h, raw_x, raw_y, cfg, cfg.multiplier);
}

double bonferroni_multiplier(double c, std::size_t tests) {
  if (tests == 0) throw PreconditionError("Bonferroni adjustment needs at least one test");
  boost::math::normal z;
  const double tail = boost::math::cdf(boost::math::complement(z, c)) / static_cast<double>(tests);
  return boost::math::quantile(boost::math::complement(z, tail));
}

OlsFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design) {
  const Eigen::Index n = y.size(), k = design.cols() + 1;
  if (design.rows() != n) throw PreconditionError("design and response row counts differ");
  if (n <= k) throw PreconditionError("too few rows for least squares");
  Eigen::MatrixXd a(n, k);
  a << Eigen::VectorXd::Ones(n), design;
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw PreconditionError("singular least-squares design");
  OlsFit fit;
  fit.coef = lu.solve(a.transpose() * y);
  const Eigen::VectorXd resid = y - a * fit.coef;
  fit.residual_variance = resid.squaredNorm() / static_cast<double>(n - k);
  fit.se = (lu.inverse().diagonal() * fit.residual_variance).array().sqrt();
  return fit;
}

}  // namespace compatlab::diagnostics
