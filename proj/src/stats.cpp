#include "collapse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collapse/error.hpp"

namespace collapse::stats {

namespace {

double mean_plain(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

Estimate mean_of(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorKind::low_statistics, "mean_of: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double m = mean_plain(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate variance_of(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorKind::low_statistics, "variance_of: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double m = mean_plain(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - m) * (v - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (n - 1.0);
  const double mu2 = m2 / n;
  const double mu4 = m4 / n;
  return {var, std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / n)};
}

Estimate covariance_of(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::invalid_parameter, "covariance_of: need two equally sized samples");
  const double n = static_cast<double>(x.size());
  const double mx = mean_plain(x);
  const double my = mean_plain(y);
  double sxy = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = (x[i] - mx) * (y[i] - my);
    sxy += p;
    sq += p * p;
  }
  const double c = sxy / n;
  return {sxy / (n - 1.0), std::sqrt(std::max(sq / n - c * c, 0.0) / n)};
}

EnsembleStats summarize(double t, const Eigen::MatrixXd& samples) {
  EnsembleStats out;
  out.t = t;
  out.n = static_cast<std::size_t>(samples.rows());
  const auto vars = samples.cols();
  out.cov.resize(vars, vars);
  out.cov_stderr.resize(vars, vars);
  std::vector<std::vector<double>> cols(vars);
  for (Eigen::Index v = 0; v < vars; ++v) {
    cols[v].assign(samples.col(v).data(), samples.col(v).data() + samples.rows());
    out.mean.push_back(mean_of(cols[v]));
    out.var.push_back(variance_of(cols[v]));
  }
  for (Eigen::Index a = 0; a < vars; ++a) {
    for (Eigen::Index b = a; b < vars; ++b) {
      const Estimate c = a == b ? out.var[a] : covariance_of(cols[a], cols[b]);
      out.cov(a, b) = out.cov(b, a) = c.value;
      out.cov_stderr(a, b) = out.cov_stderr(b, a) = c.std_err;
    }
  }
  return out;
}

Estimate batch_mean(std::span<const double> x, std::size_t batches) {
  if (batches < 2 || x.size() < batches)
    throw Error(ErrorKind::low_statistics, "batch_mean: fewer samples than batches");
  const std::size_t per = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    means[b] = mean_plain(x.subspan(b * per, per));
  Estimate e = mean_of(means);
  e.value = mean_plain(x);
  return e;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::invalid_parameter, "fit_line: need two equally sized samples");
  const double n = static_cast<double>(x.size());
  const double mx = mean_plain(x);
  const double my = mean_plain(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / (n - 2.0);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return fit;
}

Estimate fit_proportional(std::span<const double> x, std::span<const double> y,
                          std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.empty())
    throw Error(ErrorKind::invalid_parameter, "fit_proportional: size mismatch");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  return {sxy / sxx, std::sqrt(1.0 / sxx)};
}

double ks_statistic_exponential(std::span<const double> samples) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = 1.0 - std::exp(-s[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  double c = 0.0;
  if (alpha == 0.01) c = 1.628;
  else if (alpha == 0.05) c = 1.358;
  else throw Error(ErrorKind::invalid_parameter, "ks_critical_value: alpha must be 0.01 or 0.05");
  const double rn = std::sqrt(static_cast<double>(n));
  return c / (rn + 0.12 + 0.11 / rn);
}

}  // namespace collapse::stats
