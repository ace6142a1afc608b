#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sglimit/algo_config.hpp"

namespace sglimit {

enum class Family { Linear, Logistic, Poisson };

std::string family_name(Family f);
Family parse_family(const std::string& name);

/// Univariate canonical GLM: l_i has gradient (y_i - q(theta x_i + beta0)) x_i.
struct GlmModel {
  Family family = Family::Linear;
  std::vector<double> x;
  std::vector<double> y;
  double intercept = 0.0;
  bool has_domain = false;
  double domain_lo = 0.0;
  double domain_hi = 0.0;

  std::size_t size() const { return x.size(); }

  /// Throws ConfigError on length mismatch, empty data, responses outside the
  /// family's support, or a missing/invalid domain for Poisson.
  void validate() const;
};

/// Inverse link q and its derivative.
double link(Family f, double u);
double link_derivative(Family f, double u);

/// Everything about the model at its critical point that the bounds consume.
struct ModelConstants {
  double theta_hat = 0.0;
  std::vector<double> psi;    ///< psi_i = grad l_i(theta_hat)
  std::vector<double> sigma;  ///< sigma_i = -d/dtheta grad l_i(theta_hat) >= 0
  double L = 1.0;
  double C_R = 0.0;
  double Omega = 0.0;
  double SigmaInfo = 0.0;
  std::map<int, double> psi_moments;  ///< q -> mean psi^q for q in {2, 4, 6}

  std::size_t size() const { return psi.size(); }
  double psi_moment(int q) const;
};

/// Gradient of l_i at theta (i is zero-based). Throws ConfigError if i >= n.
double gradient(const GlmModel& model, std::size_t i, double theta);

/// psi_i - sigma_i (theta - theta_hat).
double linearized_gradient(const ModelConstants& c, std::size_t i, double theta);

/// Empirical score n^-1 sum grad l_i(theta).
double mean_gradient(const GlmModel& model, double theta);

/// Root of the empirical score by safeguarded Newton on a doubling bracket.
double fit_critical_point(const GlmModel& model);

ModelConstants model_constants(const GlmModel& model);

/// Builds constants directly from (theta_hat, psi, sigma); C_R is supplied.
ModelConstants constants_from(double theta_hat, std::vector<double> psi, std::vector<double> sigma,
                              double C_R);

/// Model file: header `family=<f> intercept=<v> [domain=<lo>,<hi>]`, then `x,y` lines.
GlmModel read_model(std::istream& in);
GlmModel load_model(const std::string& path);
void write_model(std::ostream& out, const GlmModel& model);

struct AssumptionReport {
  bool curvature_ok = false;   ///< all sigma_i >= 0
  bool step_size_ok = false;   ///< 0 < h < 1/(2L)
  bool smoothness_ok = false;  ///< C_R finite
  double step_cap = 0.0;       ///< 1/(2L)
  double tau2 = 0.0;
  double tau6 = 0.0;
  double K1_hat = 0.0;
  double K3_hat = 0.0;
  std::size_t replicates = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

struct AssumptionCheckOptions {
  std::size_t replicates = 2000;
  int threads = 1;
  /// When set, K-hat uses the SG(L)D iterates of this model; otherwise the
  /// linearized iterates built from the constants alone.
  const GlmModel* model = nullptr;
};

/// tau_q for even q, computed exactly from the moments of the batch mean of psi
/// and the Gaussian moments of the injected noise.
double tau_even(const ModelConstants& c, std::size_t b, double h, double beta_inv, int q);

AssumptionReport check_assumptions(const ModelConstants& c, const AlgoConfig& cfg,
                                   const AssumptionCheckOptions& opts = {});

}  // namespace sglimit
