#include <algorithm>
#include <cmath>

#include "sglimit/errors.hpp"
#include "sglimit/loss_models.hpp"
#include "sglimit/sgld_sim.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double double_factorial_odd(int j) {  // (j-1)!! for even j
  double r = 1.0;
  for (int i = j - 1; i > 1; i -= 2) r *= i;
  return r;
}

constexpr std::uint64_t kAssumptionStreamTag = 0x61737375ULL;

}  // namespace

double tau_even(const ModelConstants& c, std::size_t b, double h, double beta_inv, int q) {
  if (q < 2 || q % 2 != 0) throw ConfigError("tau_even needs an even order q >= 2");
  if (b < 1 || !(h > 0.0)) throw ConfigError("tau_even needs b >= 1 and h > 0");
  const std::size_t n = c.size();

  std::vector<double> mu(q + 1, 1.0);  // mu[j] = mean psi^j
  std::vector<double> pw(n);
  for (int j = 1; j <= q; ++j) {
    for (std::size_t i = 0; i < n; ++i) pw[i] = std::pow(c.psi[i], j);
    mu[j] = mean(pw);
  }

  // moments of the batch sum: M_k(m) = sum_j C(k, j) M_{k-j}(m-1) mu_j
  std::vector<double> m(q + 1, 0.0);
  m[0] = 1.0;
  for (std::size_t step = 0; step < b; ++step) {
    std::vector<double> next(q + 1, 0.0);
    for (int k = 0; k <= q; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += binomial(k, j) * m[k - j] * mu[j];
      next[k] = s;
    }
    m = std::move(next);
  }
  const double bd = static_cast<double>(b);
  const double c2 = 2.0 * beta_inv / h;
  double total = 0.0;
  for (int j = 0; j <= q; j += 2) {
    const double mean_pow = m[q - j] / std::pow(bd, q - j);
    total += binomial(q, j) * mean_pow * std::pow(c2, j / 2) * double_factorial_odd(j);
  }
  return std::pow(std::max(total, 0.0), 1.0 / q);
}

AssumptionReport check_assumptions(const ModelConstants& c, const AlgoConfig& cfg,
                                   const AssumptionCheckOptions& opts) {
  AssumptionReport rep;
  rep.curvature_ok = std::all_of(c.sigma.begin(), c.sigma.end(), [](double s) { return s >= 0.0; });
  if (!rep.curvature_ok) rep.failures.emplace_back("curvature: some sigma_i < 0");

  rep.smoothness_ok = std::isfinite(c.C_R) && c.C_R >= 0.0;
  if (!rep.smoothness_ok) rep.failures.emplace_back("smoothness: C_R is not finite");

  rep.step_cap = 1.0 / (2.0 * c.L);
  rep.step_size_ok = cfg.h > 0.0 && cfg.h < rep.step_cap;
  if (!rep.step_size_ok) rep.failures.emplace_back("step size: h is not in (0, 1/(2L))");

  rep.tau2 = tau_even(c, cfg.b, cfg.h, cfg.beta_inv, 2);
  rep.tau6 = tau_even(c, cfg.b, cfg.h, cfg.beta_inv, 6);
  rep.replicates = opts.replicates;
  if (opts.replicates < 2) return rep;

  AlgoConfig sim = cfg;
  sim.w = 1.0;
  sim.master_seed = derive_seed(cfg.master_seed, kAssumptionStreamTag);
  PathEnsemble ens;
  try {
    ens = opts.model ? sgld_ensemble(*opts.model, c, sim, opts.replicates, opts.threads)
                     : linearized_ensemble(c, sim, opts.replicates, opts.threads);
  } catch (const NumericError& e) {
    rep.failures.emplace_back(std::string("iterate moments: iterates diverged: ") + e.what());
    rep.K1_hat = rep.K3_hat = std::numeric_limits<double>::infinity();
    return rep;
  }

  std::vector<double> col2(opts.replicates), col6(opts.replicates);
  const double d2 = cfg.h * rep.tau2 * rep.tau2;
  const double d6 = cfg.h * rep.tau6 * rep.tau6;
  for (std::size_t k = 1; k <= cfg.alpha; ++k) {
    for (std::size_t r = 0; r < opts.replicates; ++r) {
      const double v = ens.row(r)[k];
      col2[r] = v * v;
      col6[r] = col2[r] * col2[r] * col2[r];
    }
    const double m2 = mean(col2);
    const double m6 = std::cbrt(mean(col6));
    if (d2 > 0.0) rep.K1_hat = std::max(rep.K1_hat, m2 / d2);
    if (d6 > 0.0) rep.K3_hat = std::max(rep.K3_hat, m6 / d6);
  }
  if (!std::isfinite(rep.K1_hat) || !std::isfinite(rep.K3_hat)) {
    rep.failures.emplace_back("iterate moments: moment ratios are not finite");
  }
  return rep;
}

}  // namespace sglimit
