#pragma once

#include <map>
#include <string>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/loss_models.hpp"

namespace sglimit {

/// Every symbol the bound formulas consume. beta_inv = 0 encodes beta = infinity.
struct BoundInputs {
  double L = 1.0;
  double C_R = 0.0;
  double Omega = 0.0;
  double Sigma = 0.0;
  double E_psi4 = 0.0;
  double E_psi6 = 0.0;
  double h = 0.0;
  double b = 1.0;
  double beta_inv = 0.0;
  double alpha = 1.0;
  double w = 1.0;
  double K1 = 1.0;
  double K3 = 1.0;
  double c_num = 1.0;
  double C_bar = 1.0;

  /// Throws ConfigError unless every field is finite, L >= 1, 0 < h <= 1,
  /// 0 <= beta_inv <= 1, L h < 1, b >= 1, alpha >= 1, w > 0 and moments are nonnegative.
  void validate() const;
};

BoundInputs bound_inputs(const ModelConstants& c, const AlgoConfig& cfg, double K1, double K3,
                         double c_num = 1.0, double C_bar = 1.0);

/// One summand of a displayed formula, for --explain.
struct BoundTerm {
  std::string component;
  std::string formula;
  double value = 0.0;
};

struct BoundBreakdown {
  double eps_R = 0.0;
  double eps_Z = 0.0;
  double eps_rem = 0.0;
  double eps_exch = 0.0;
  double eps_cov = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
  double E1 = 0.0;
  double C_max = 0.0;
  double total = 0.0;
  bool sigma_zero_limit = false;  ///< the (1/Sigma^2) log^2(1 + alpha h Sigma) term used its Sigma -> 0 limit
  std::vector<BoundTerm> terms;
};

double e1_constant(const BoundInputs& in);

struct DConstants {
  double D1 = 0.0;
  double D2 = 0.0;
  bool sigma_zero_limit = false;
};
DConstants d_constants(const BoundInputs& in, std::vector<BoundTerm>* terms = nullptr);

BoundBreakdown eps_components(const BoundInputs& in);

/// (C_R^3 + C_R L^6 + L^7) for the simplified rates.
double rate_prefactor(double C_R, double L);

/// calib * prefactor * sqrt(m^6 b (log(n/b) + m^6) / n). Requires n > b.
double simplified_rate_statistical(double n, double b, double m, double C_R, double L, double calib = 1.0);

/// calib * prefactor * sqrt(h log(1/h) + beta_inv).
double simplified_rate_numerical(double h, double beta_inv, double C_R, double L, double calib = 1.0);

/// C_max times the bracket of the general simplified bound. Rejects alpha h > C_bar.
double general_simplified_bound(const BoundInputs& in, std::vector<BoundTerm>* terms = nullptr);
double general_simplified_cmax(const BoundInputs& in);

/// C(At, B, Bt) in the OU-to-OU comparison bound.
double ou_comparison_constant(double A_t, double B, double B_t);

struct OuBoundResult {
  double C = 0.0;
  double K1 = 0.0;
  double K3 = 0.0;
  double K = 0.0;
  double difference_factor = 0.0;
  double bound = 0.0;
};

/// K [|A - At| + |B - Bt| + |A - At|^3 + |B - Bt|^3] with caller-supplied C_1, C_3.
OuBoundResult ou_to_ou_bound(double A, double A_t, double B, double B_t, double C1 = 1.0, double C3 = 1.0);

struct MetricExponents {
  double lp_exponent = 0.0;
  double bw_exponent = 0.0;
  bool lp_vacuous = false;
  bool bw_vacuous = false;
};

/// 1/20 - 9/(200r - 20) and 1/14 - 2/(49r - 21).
MetricExponents metric_rate_exponents(double r);

struct IterateAverageBound {
  double variance_rhs = 0.0;
  double mean_rhs = 0.0;
};

IterateAverageBound iterate_average_bound(double eps, double mean_abs_Y, const BoundInputs& in);

}  // namespace sglimit
