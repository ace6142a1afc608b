#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>

namespace sglimit {

/// Test functional on a grid path X_0..X_alpha (piecewise constant, cadlag).
///
/// value(X) = scale * inner(X) where inner is
///   IterateAverage   g1 = alpha^-1 sum_{k=1}^{alpha} X_k
///   SquaredAverage   g2 = g1^2
///   ClippedSup       min(sup_k |X_k|, c)
///   EvalClip         clip(X_{floor(alpha t)}, -c, c)
///   ClippedAverage   clip(slope * g1, -c, c)
struct PathFunctional {
  enum class Kind { IterateAverage, SquaredAverage, ClippedSup, EvalClip, ClippedAverage };

  Kind kind = Kind::IterateAverage;
  double c = std::numeric_limits<double>::infinity();
  double t = 1.0;
  double slope = 1.0;
  double scale = 1.0;
  double m_norm_bound = 1.0;  ///< certified upper bound on the M-norm (g1: 1.53, g2: 3.53)

  /// Bounded by 1 and 1-Lipschitz in sup norm (eligible for the BW dictionary).
  bool bw_certified() const;
  std::string name() const;
};

PathFunctional g1();
PathFunctional g2();
PathFunctional clipped_sup(double c);
PathFunctional eval_clip(double t, double c);
PathFunctional clipped_average(double slope, double c);

/// s * g, with the M-norm bound scaled alongside.
PathFunctional scaled(PathFunctional g, double s);

/// Alpha^-1 sum_{k=1}^{alpha} X_k. Throws ConfigError for fewer than two grid values.
double iterate_average(std::span<const double> path);

double evaluate(const PathFunctional& g, std::span<const double> path);

struct DistanceEstimate {
  double value = 0.0;
  double std_error = 0.0;   ///< Monte Carlo standard error (NaN when not applicable)
  double resolution = 0.0;  ///< grid resolution for resolution-limited estimators
  std::size_t replicates = 0;
  std::string method;
  bool censored = false;
  bool uses_resolution = false;

  /// The column reported as stderr_or_resolution.
  double uncertainty() const { return uses_resolution ? resolution : std_error; }
};

}  // namespace sglimit
