#include "sglimit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sglimit/errors.hpp"
#include "sglimit/functionals.hpp"
#include "sglimit/parallel.hpp"
#include "sglimit/sgld_sim.hpp"

namespace sglimit {

namespace {

constexpr std::uint64_t kPlainOuStreamTag = 0x6f752d706c61696eULL;

}  // namespace

GlmModel synth_data(const SynthSpec& spec) {
  if (spec.n < 2) throw ConfigError("synthetic data needs n >= 2");
  if (!(spec.c > 0.0) || !std::isfinite(spec.c)) throw ConfigError("synthetic covariate half-width c must be positive");
  if (!(spec.noise_sd >= 0.0)) throw ConfigError("synthetic noise_sd must be nonnegative");
  GlmModel m;
  m.family = spec.family;
  m.intercept = spec.intercept;
  if (spec.family == Family::Poisson) {
    m.has_domain = true;
    m.domain_lo = spec.domain_lo;
    m.domain_hi = spec.domain_hi;
  }
  Rng rng(derive_seed(spec.seed, 0));
  m.x.resize(spec.n);
  m.y.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x = spec.c * (2.0 * rng.uniform() - 1.0);
    const double u = spec.theta_true * x + spec.intercept;
    double y = 0.0;
    switch (spec.family) {
      case Family::Linear: y = u + (spec.noise_sd > 0.0 ? spec.noise_sd * rng.normal() : 0.0); break;
      case Family::Logistic: y = rng.uniform() < link(Family::Logistic, u) ? 1.0 : 0.0; break;
      case Family::Poisson: {
        std::poisson_distribution<long> pois(std::exp(u));
        y = static_cast<double>(pois(rng));
        break;
      }
    }
    m.x[i] = x;
    m.y[i] = y;
  }
  if (spec.family == Family::Logistic &&
      std::all_of(m.y.begin(), m.y.end(), [&](double v) { return v == m.y.front(); })) {
    throw ConfigError("synthetic logistic responses are all identical (separated data)");
  }
  m.validate();
  return m;
}

AverageMoments linearized_average_moments(const ModelConstants& c, const AlgoConfig& cfg) {
  cfg.validate();
  const std::size_t n = c.size();
  std::vector<double> s2(n), sp(n);
  for (std::size_t i = 0; i < n; ++i) {
    s2[i] = c.sigma[i] * c.sigma[i];
    sp[i] = c.sigma[i] * c.psi[i];
  }
  const double h = cfg.h;
  const double b = static_cast<double>(cfg.b);
  const double psi_bar = mean(c.psi);
  const double var_psi = c.Omega - psi_bar * psi_bar;
  const double var_sigma = mean(s2) - c.SigmaInfo * c.SigmaInfo;
  const double cov_sp = mean(sp) - c.SigmaInfo * psi_bar;

  // one step: eta' = a eta + e with a = 1 - h s, e = h p + sqrt(2 h beta_inv) xi
  const double Ea = 1.0 - h * c.SigmaInfo;
  const double Ea2 = 1.0 - 2.0 * h * c.SigmaInfo + h * h * (c.SigmaInfo * c.SigmaInfo + var_sigma / b);
  const double Ee = h * psi_bar;
  const double Ee2 = h * h * (psi_bar * psi_bar + var_psi / b) + 2.0 * h * cfg.beta_inv;
  const double Eae = h * psi_bar - h * h * (c.SigmaInfo * psi_bar + cov_sp / b);

  double mu = 0.0;   // E eta_k
  double m2 = 0.0;   // E eta_k^2
  double T = 0.0;    // sum_{1 <= j < k} E eta_j eta_k
  double P = 0.0;    // sum_{1 <= j < k} E eta_j
  double S = 0.0;    // sum_{j,k >= 1} E eta_j eta_k up to the current k
  double G1 = 0.0;
  for (std::size_t k = 0; k < cfg.alpha; ++k) {
    const double T_next = Ea * (T + m2) + Ee * (P + mu);
    const double P_next = P + mu;
    const double mu_next = Ea * mu + Ee;
    const double m2_next = Ea2 * m2 + 2.0 * Eae * mu + Ee2;
    T = T_next;
    P = P_next;
    mu = mu_next;
    m2 = m2_next;
    S += m2 + 2.0 * T;
    G1 += mu;
  }
  const double alpha = static_cast<double>(cfg.alpha);
  return {cfg.w * G1 / alpha, cfg.w * cfg.w * S / (alpha * alpha)};
}

double ou_grid_average_second_moment(const OuParams& p, std::size_t alpha) {
  p.validate();
  if (alpha < 1) throw ConfigError("alpha must be at least 1");
  const double a = static_cast<double>(alpha);
  std::vector<double> rows(alpha);
  for (std::size_t k = 1; k <= alpha; ++k) {
    const double tk = static_cast<double>(k) / a;
    double s = 0.5 * ou_covariance(p, tk, tk);
    for (std::size_t j = 1; j < k; ++j) s += ou_covariance(p, static_cast<double>(j) / a, tk);
    rows[k - 1] = 2.0 * s;
  }
  return pairwise_sum(rows) / (a * a);
}

GapPoint decomposed_gap_point(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                              std::size_t R, int threads) {
  cfg.validate();
  if (R < 2) throw ConfigError("decomposed gap needs R >= 2");
  GapPoint pt;
  pt.h = cfg.h;
  pt.alpha = cfg.alpha;
  pt.w = cfg.w;
  pt.beta_inv = cfg.beta_inv;
  pt.limit = limit_params(c, cfg);
  pt.replicates = R;

  std::vector<double> d1(R), d2(R);
  parallel_for(R, threads, [&](std::size_t r) {
    Rng rng = replicate_stream(cfg.master_seed, r);
    BatchDraw draw;
    draw_batches_into(draw, model.size(), cfg.alpha, cfg.b, rng);
    std::vector<double> y(cfg.alpha + 1), ylin(cfg.alpha + 1);
    run_sgld_into(model, c, cfg, draw, y);
    run_linearized_into(c, cfg, draw, ylin);
    for (double& v : y) v = cfg.w * (v - c.theta_hat);
    for (double& v : ylin) v *= cfg.w;
    const double a = iterate_average(y);
    const double al = iterate_average(ylin);
    d1[r] = a - al;
    d2[r] = a * a - al * al;
  });
  pt.paired_g1 = estimate_mean(d1);
  pt.paired_g2 = estimate_mean(d2);
  pt.cov_paired = sample_covariance(d1, d2);
  pt.linearized = linearized_average_moments(c, cfg);
  pt.ou_grid_g2 = ou_grid_average_second_moment(pt.limit, cfg.alpha);

  const double Rd = static_cast<double>(R);
  pt.mean_g1 = pt.paired_g1.mean + pt.linearized.mean_g1;
  pt.mean_g1_se = pt.paired_g1.std_error;
  const double eg2 = pt.paired_g2.mean + pt.linearized.mean_g2;
  pt.gap_g2 = std::abs(eg2 - pt.ou_grid_g2);
  pt.gap_g2_se = pt.paired_g2.std_error;
  pt.var_y = eg2 - pt.mean_g1 * pt.mean_g1;
  const double se1 = pt.paired_g1.std_error, se2 = pt.paired_g2.std_error;
  pt.var_y_se = std::sqrt(std::max(
      0.0, se2 * se2 + 4.0 * pt.mean_g1 * pt.mean_g1 * se1 * se1 - 4.0 * pt.mean_g1 * pt.cov_paired / Rd));
  pt.var_z = ou_average_variance(pt.limit);
  pt.var_gap = std::abs(pt.var_y - pt.var_z);
  pt.var_gap_se = pt.var_y_se;
  return pt;
}

DistanceEstimate plain_gap_point(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                                 const PathFunctional& g, std::size_t R, int threads) {
  cfg.validate();
  if (R < 2) throw ConfigError("plain gap needs R >= 2");
  const OuParams limit = limit_params(c, cfg);
  const std::uint64_t ou_seed = derive_seed(cfg.master_seed, kPlainOuStreamTag);
  std::vector<double> gy(R), gz(R);
  parallel_for(R, threads, [&](std::size_t r) {
    Rng rng = replicate_stream(cfg.master_seed, r);
    BatchDraw draw;
    draw_batches_into(draw, model.size(), cfg.alpha, cfg.b, rng);
    std::vector<double> y(cfg.alpha + 1), z(cfg.alpha + 1);
    run_sgld_into(model, c, cfg, draw, y);
    for (double& v : y) v = cfg.w * (v - c.theta_hat);
    gy[r] = evaluate(g, y);
    Rng zr = replicate_stream(ou_seed, r);
    simulate_ou_exact_into(limit, zr, z);
    gz[r] = evaluate(g, z);
  });
  DistanceEstimate out;
  out.value = std::abs(mean(gy) - mean(gz));
  out.std_error = std::sqrt(sample_variance(gy) / static_cast<double>(R) + sample_variance(gz) / static_cast<double>(R));
  out.replicates = R;
  out.method = "plain_gap_" + g.name();
  return out;
}

RateStudyResult rate_study(const GlmModel& model, const ModelConstants& c, const RateStudySpec& spec) {
  if (spec.h_grid.size() < 3) throw ConfigError("rate study needs at least three step sizes");
  for (std::size_t i = 1; i < spec.h_grid.size(); ++i) {
    if (!(spec.h_grid[i] < spec.h_grid[i - 1])) throw ConfigError("h_grid must be strictly decreasing");
  }
  RateStudyResult res;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < spec.h_grid.size(); ++i) {
    const double h = spec.h_grid[i];
    const AlgoConfig cfg = AlgoConfig::numerical(h, spec.b, spec.beta_coupling * h, spec.c1, spec.c2, spec.c3,
                                                 derive_seed(spec.seed, i));
    res.points.push_back(decomposed_gap_point(model, c, cfg, spec.replicates, spec.threads));
    if (spec.plain_estimator) res.plain.push_back(plain_gap_point(model, c, cfg, g2(), spec.replicates, spec.threads));
    const double gap = res.points.back().gap_g2;
    if (!(gap > 0.0)) throw NumericError("rate study gap is zero; the log-log fit is undefined");
    lx.push_back(std::log(h));
    ly.push_back(std::log(gap));
  }
  res.fit = ols_fit(lx, ly);
  res.monotone = true;
  for (std::size_t i = 0; i + 1 < res.points.size(); ++i) {
    const auto& p = res.points[i];
    const auto& q = res.points[i + 1];
    if (p.gap_g2 < q.gap_g2 - 2.0 * std::hypot(p.gap_g2_se, q.gap_g2_se)) res.monotone = false;
  }
  return res;
}

}  // namespace sglimit
