#include "sglimit/stats.hpp"

#include <cmath>
#include <limits>

#include "sglimit/errors.hpp"

namespace sglimit {

namespace {

constexpr std::size_t kLeafSize = 64;

double pairwise_sum_impl(const double* data, std::size_t n) {
  if (n <= kLeafSize) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ConfigError("mean of an empty sample");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw ConfigError("sample variance needs at least two values");
  const double m = mean(values);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - m;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(values.size() - 1);
}

MeanEstimate estimate_mean(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  out.mean = mean(values);
  out.std_error = values.size() >= 2
                    ? std::sqrt(sample_variance(values) / static_cast<double>(values.size()))
                    : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ConfigError("sample covariance needs two equally sized samples of size >= 2");
  }
  const double ma = mean(a);
  const double mb = mean(b);
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
  return pairwise_sum(prod) / static_cast<double>(a.size() - 1);
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("ols_fit needs two equally sized samples of size >= 2");
  }
  const std::size_t n = x.size();
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("ols_fit: abscissae are all equal");

  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.residual_sd = std::sqrt(rss / static_cast<double>(n - 2));
    fit.slope_stderr = fit.residual_sd / std::sqrt(sxx);
  } else {
    fit.residual_sd = std::numeric_limits<double>::quiet_NaN();
    fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

}  // namespace sglimit
