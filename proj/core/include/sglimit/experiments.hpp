#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/loss_models.hpp"
#include "sglimit/ou_sim.hpp"
#include "sglimit/path_functional.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

/// Synthetic GLM data: x_i ~ U[-c, c], responses drawn from the family at theta_true.
struct SynthSpec {
  Family family = Family::Linear;
  std::size_t n = 100;
  double c = 1.0;
  double theta_true = 1.0;
  double intercept = 0.0;
  double noise_sd = 1.0;  ///< linear family only
  double domain_lo = -2.0;
  double domain_hi = 2.0;
  std::uint64_t seed = 0;
};

GlmModel synth_data(const SynthSpec& spec);

/// Exact E g1 and E g2 of the linearized path Ycal_t = w eta_{floor(alpha t)}.
struct AverageMoments {
  double mean_g1 = 0.0;
  double mean_g2 = 0.0;
};
AverageMoments linearized_average_moments(const ModelConstants& c, const AlgoConfig& cfg);

/// E g2 of the discretized OU path, alpha^-2 sum_{j,k=1}^{alpha} Cov(Z_{j/alpha}, Z_{k/alpha}).
double ou_grid_average_second_moment(const OuParams& p, std::size_t alpha);

/// One grid point of a Y-versus-Z comparison. The Y-side expectations are split as
/// E g(Y) = E[g(Y) - g(Ycal)] (paired Monte Carlo, shared draws) + E g(Ycal) (exact).
struct GapPoint {
  double h = 0.0;
  std::size_t alpha = 0;
  double w = 0.0;
  double beta_inv = 0.0;
  OuParams limit;
  std::size_t replicates = 0;

  MeanEstimate paired_g1;  ///< g1(Y) - g1(Ycal)
  MeanEstimate paired_g2;  ///< g2(Y) - g2(Ycal)
  double cov_paired = 0.0;  ///< sample covariance of the two paired differences
  AverageMoments linearized;
  double ou_grid_g2 = 0.0;

  double mean_g1 = 0.0;  ///< estimate of E g1(Y)
  double mean_g1_se = 0.0;
  double gap_g2 = 0.0;  ///< |E g2(Y) - E g2(Zcal)|, unnormalized
  double gap_g2_se = 0.0;
  double var_y = 0.0;  ///< Var(g1(Y))
  double var_y_se = 0.0;
  double var_z = 0.0;  ///< Var(int_0^1 Z_t dt) by quadrature
  double var_gap = 0.0;
  double var_gap_se = 0.0;
};

GapPoint decomposed_gap_point(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                              std::size_t R, int threads);

/// |mean g(Y) - mean g(Zcal)| from independent Y and Z samples (unnormalized).
DistanceEstimate plain_gap_point(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                                 const PathFunctional& g, std::size_t R, int threads);

struct RateStudySpec {
  std::vector<double> h_grid;  ///< strictly decreasing
  std::size_t b = 1;
  double beta_coupling = 1.0;  ///< beta_inv = beta_coupling * h
  double c1 = 4.0;
  double c2 = 1.0;
  double c3 = 1.0;
  std::size_t replicates = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool plain_estimator = false;
};

struct RateStudyResult {
  std::vector<GapPoint> points;
  std::vector<DistanceEstimate> plain;  ///< filled when plain_estimator is set
  LinearFit fit;                        ///< log gap against log h
  bool monotone = false;                ///< gap_k >= gap_{k+1} - 2 combined SE along the grid
};

/// Numerical preset at every h; seeds derive from spec.seed and the grid index.
RateStudyResult rate_study(const GlmModel& model, const ModelConstants& c, const RateStudySpec& spec);

}  // namespace sglimit
