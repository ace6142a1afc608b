#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/loss_models.hpp"
#include "sglimit/path_functional.hpp"
#include "sglimit/rng.hpp"
#include "sglimit/sgld_sim.hpp"

namespace sglimit {

/// dZ = -B Z dt + sqrt(A) dW, Z_0 = z0.
struct OuParams {
  double B = 0.0;
  double A = 0.0;
  double z0 = 0.0;

  void validate() const;
};

/// B = alpha h Sigma, A = w^2 (alpha h^2 Omega / b + 2 alpha h beta_inv).
OuParams limit_params(const ModelConstants& c, const AlgoConfig& cfg);

/// B dt below this uses the series form of the transition variance.
inline constexpr double kSmallDecayThreshold = 1e-8;

/// Exact transition over dt: Z_{t+dt} = decay Z_t + sqrt(variance) N(0, 1).
struct OuTransition {
  double decay = 1.0;
  double variance = 0.0;
};
OuTransition ou_transition(const OuParams& p, double dt);

/// Variance A (1 - e^{-2 B dt}) / (2B), from the closed form (exact branch) or
/// the series A dt (1 - B dt + (2/3)(B dt)^2) (small branch).
double ou_transition_variance_exact_branch(double A, double B, double dt);
double ou_transition_variance_series_branch(double A, double B, double dt);

/// Grid path Z_{k/alpha}, k = 0..alpha, with one normal per step.
std::vector<double> simulate_ou_exact(const OuParams& p, std::size_t alpha, Rng& rng);
void simulate_ou_exact_into(const OuParams& p, Rng& rng, std::span<double> out);

/// Zcal_t = Z_{floor(alpha t)/alpha} evaluated from the grid path.
double discretized_ou(std::span<const double> path, double t);

/// Cov(Z_t, Z_s) for z0 = 0.
double ou_covariance(const OuParams& p, double t, double s);

/// Two exact paths consuming the same standard normal at every step.
std::pair<std::vector<double>, std::vector<double>> coupled_ou_pair(const OuParams& p1, const OuParams& p2,
                                                                    std::size_t alpha, Rng& rng);

/// R exact OU paths; label gets the `ou_` prefix.
PathEnsemble ou_ensemble(const OuParams& p, std::size_t alpha, std::size_t R, std::uint64_t seed,
                         int threads, const std::string& label = "limit");

/// X with dX = -a X dt + sqrt(A) dW, checked against the L^p maximal inequality.
struct MaxIneqSpec {
  double a = 1.0;
  double A = 1.0;
  double gamma = 0.5;
  double p = 2.0;
  std::size_t grid_size = 500;
  std::size_t replicates = 100000;
};

struct MaxIneqResult {
  double lhs_mc = 0.0;
  double std_error = 0.0;
  double rhs_no_cp = 0.0;
  double implied_Cp = 0.0;
  std::size_t replicates = 0;
};

/// The maximal-inequality right side without C_p (closed form).
double max_inequality_rhs(double a, double A, double gamma, double p);

MaxIneqResult maximal_inequality_experiment(const MaxIneqSpec& spec, std::uint64_t seed, int threads);

/// |E g(Z) - E g(Ztilde)| from coupled pairs; the standard error is that of the paired difference.
DistanceEstimate ou_to_ou_gap_mc(const OuParams& p1, const OuParams& p2, const PathFunctional& g,
                                 std::size_t alpha, std::size_t R, std::uint64_t seed, int threads);

}  // namespace sglimit
