#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace collapse::stats {

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

Estimate mean_of(std::span<const double> x);
/// Unbiased sample variance; std_err from the fourth central moment.
Estimate variance_of(std::span<const double> x);
/// Unbiased sample covariance; std_err from E[(x-mx)^2 (y-my)^2] - cov^2.
Estimate covariance_of(std::span<const double> x, std::span<const double> y);

/// Means, variances and covariances with standard errors over an ensemble
/// observed at one time. Rows of `samples` are trajectories, columns variables.
struct EnsembleStats {
  double t = 0.0;
  std::size_t n = 0;
  std::vector<Estimate> mean;
  std::vector<Estimate> var;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd cov_stderr;
};

EnsembleStats summarize(double t, const Eigen::MatrixXd& samples);

/// Batch-means estimate of the mean of a correlated series.
Estimate batch_mean(std::span<const double> x, std::size_t batches = 32);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Weighted least squares through the origin, y = c x, weights 1/sigma^2.
Estimate fit_proportional(std::span<const double> x, std::span<const double> y,
                          std::span<const double> sigma);

/// One-sample Kolmogorov-Smirnov statistic against the unit exponential.
double ks_statistic_exponential(std::span<const double> samples);
/// Critical value of the KS statistic at significance `alpha` (0.05 or 0.01),
/// Stephens' finite-n correction of the asymptotic quantile.
double ks_critical_value(std::size_t n, double alpha);

}  // namespace collapse::stats
