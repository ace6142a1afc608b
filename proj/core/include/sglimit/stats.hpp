#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sglimit {

/// Pairwise (cascade) summation with a fixed, index-determined tree.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Unbiased sample variance (two-pass). Requires at least two values.
double sample_variance(std::span<const double> values);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and its Monte Carlo standard error.
MeanEstimate estimate_mean(std::span<const double> values);

/// Sample covariance of paired values (unbiased).
double sample_covariance(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_sd = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x with the classical
/// standard error of the slope (needs at least three points for a finite SE).
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

}  // namespace sglimit
