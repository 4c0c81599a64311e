#pragma once

// Nested ridge regressions: how much better is h(Y) predicted from features of
// (X, Y) than from features of Y alone?

#include "compatlab/diagnostics/features.hpp"

#include <cstdint>
#include <string>

namespace compatlab::diagnostics {

struct TestConfig {
  double lambda = 1e-6;  ///< ridge penalty per training row, on standardized columns
  std::size_t degree = 2;
  double split = 0.5;  ///< training fraction; the first rows train, the rest evaluate
  std::size_t bootstrap = 200;
  double multiplier = 3.0;  ///< per-test multiplier before any Bonferroni adjustment
  std::size_t feature_count = 2;
  std::uint64_t seed = 0;  ///< bootstrap streams

  void validate() const;
};

/// Ridge fit on standardized columns with an unpenalized intercept. Columns
/// with zero training variance are dropped.
class RidgeFit {
 public:
  RidgeFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda);
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
  /// No column carried any variance: the fit is the intercept alone.
  bool degenerate() const { return kept_.empty(); }

 private:
  std::vector<Eigen::Index> kept_;
  Eigen::VectorXd mean_, scale_, beta_;
  double intercept_ = 0;
};

/// Standard deviation of the mean of `d` over `replicates` resamples of its
/// entries. Replicate b draws from Stream(seed, first_stream + b, bootstrap).
double bootstrap_se(const Eigen::VectorXd& d, std::size_t replicates, std::uint64_t seed,
                    std::uint32_t first_stream = 0);

struct GapEntry {
  std::string alpha;
  std::string h_id;
  double mse_y = 0;
  double mse_xy = 0;
  double gap = 0;
  double se = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  bool reject = false;
  bool degenerate = false;
};

/// Fits h on polynomial(raw_y) and on polynomial([raw_y raw_x]); the second
/// feature set contains the first. `multiplier` replaces cfg.multiplier so
/// callers can pass a Bonferroni-adjusted value.
GapEntry l2_gap(const Eigen::VectorXd& h, const FeatureMatrix& raw_x, const FeatureMatrix& raw_y,
                const TestConfig& cfg, double multiplier, std::uint32_t first_stream = 0);
GapEntry l2_gap(const Eigen::VectorXd& h, const FeatureMatrix& raw_x, const FeatureMatrix& raw_y,
                const TestConfig& cfg);

/// Phi^{-1}(1 - (1 - Phi(c)) / tests): keeps the family-wise level of a
/// single c-sigma test.
double bonferroni_multiplier(double c, std::size_t tests);

struct OlsFit {
  Eigen::VectorXd coef;  ///< intercept first
  Eigen::VectorXd se;
  double residual_variance = 0;
};

/// Ordinary least squares of y on [1, design] with classical standard errors.
OlsFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& design);

}  // namespace compatlab::diagnostics
