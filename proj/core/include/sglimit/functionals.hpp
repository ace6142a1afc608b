#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sglimit/ou_sim.hpp"
#include "sglimit/path_functional.hpp"
#include "sglimit/sgld_sim.hpp"

namespace sglimit {

/// |mean_A g - mean_B g| / m_norm_bound, independent-sample delta-method standard error.
DistanceEstimate functional_gap(const PathEnsemble& ensA, const PathEnsemble& ensB, const PathFunctional& g);

/// As functional_gap for row-paired ensembles (shared draws); the standard error is
/// that of the mean paired difference.
DistanceEstimate functional_gap_paired(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                       const PathFunctional& g);

/// Var(int_0^1 Z_t dt) by composite 8-point Gauss-Legendre on the triangle s < t
/// (Duffy map s = t v), `nodes` points per axis (a multiple of 8).
double ou_average_variance(const OuParams& p, std::size_t nodes = 512);

struct VarianceGapReport {
  double var_y = 0.0;
  double var_y_se = 0.0;
  double mean_g1 = 0.0;
  double mean_g1_se = 0.0;
  double var_z_analytic = 0.0;
  double gap = 0.0;
  double rhs_bound = 0.0;
  std::size_t replicates = 0;
};

VarianceGapReport variance_gap(const PathEnsemble& ensY, const OuParams& paramsZ, double eps);

/// Sup-norm distance between two grid paths.
double sup_distance(std::span<const double> a, std::span<const double> b);

struct LevyProkhorovOptions {
  std::size_t max_centers = 0;  ///< 0 uses every ensB path as a ball center
};

/// Smallest eps in eps_grid with P_A[K] <= P_B[K^eps] + eps and the reverse, for K
/// the closed sup-norm balls centered at ensB paths with radii from eps_grid.
DistanceEstimate levy_prokhorov_estimate(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                         std::span<const double> eps_grid, const LevyProkhorovOptions& opts = {});

/// 0.01, 0.02, ..., 1.
std::vector<double> auto_eps_grid();

/// Max over the dictionary of |mean_A g - mean_B g|; throws ConfigError for an uncertified member.
DistanceEstimate bounded_wasserstein_lower(const PathEnsemble& ensA, const PathEnsemble& ensB,
                                           std::span<const PathFunctional> dictionary);

/// Clipped sups, clipped evaluations and a clipped average, all certified.
std::vector<PathFunctional> default_bw_dictionary();

/// g evaluated on every row of the ensemble.
std::vector<double> evaluate_rows(const PathFunctional& g, const PathEnsemble& ens);

}  // namespace sglimit
