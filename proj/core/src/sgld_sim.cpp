#include "sglimit/sgld_sim.hpp"

#include <cmath>
#include <limits>
#include <new>

#include "sglimit/errors.hpp"
#include "sglimit/parallel.hpp"

namespace sglimit {

namespace {

void check_draw(const BatchDraw& draw, const AlgoConfig& cfg, std::size_t n) {
  if (draw.alpha != cfg.alpha || draw.b != cfg.b) throw ConfigError("batch draw does not match the configuration");
  for (auto i : draw.indices) {
    if (i >= n) throw ConfigError("batch draw index exceeds the number of observations");
  }
}

double noise_scale(const AlgoConfig& cfg) { return std::sqrt(2.0 * cfg.h * cfg.beta_inv); }

double batch_sum(std::span<const double> v, std::span<const std::uint32_t> batch) {
  double s = 0.0;
  for (auto i : batch) s += v[i];
  return s;
}

}  // namespace

void draw_batches_into(BatchDraw& d, std::size_t n, std::size_t alpha, std::size_t b, Rng& rng) {
  if (n < 1 || n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("unsupported number of observations");
  if (alpha < 1 || b < 1) throw ConfigError("alpha and b must be at least 1");
  d.alpha = alpha;
  d.b = b;
  const auto n32 = static_cast<std::uint32_t>(n);
  d.indices.resize(alpha * b);
  for (auto& i : d.indices) i = rng.index(n32);
  d.gauss.resize(alpha);
  for (auto& g : d.gauss) g = rng.normal();
  d.K = static_cast<std::size_t>(rng.uniform() * static_cast<double>(alpha));
  if (d.K >= alpha) d.K = alpha - 1;
  d.swap_batch.resize(b);
  for (auto& i : d.swap_batch) i = rng.index(n32);
  d.swap_gauss = rng.normal();
}

BatchDraw draw_batches(std::size_t n, std::size_t alpha, std::size_t b, Rng& rng) {
  BatchDraw d;
  draw_batches_into(d, n, alpha, b, rng);
  return d;
}

BatchDraw swapped(const BatchDraw& draw) {
  BatchDraw out = draw;
  for (std::size_t i = 0; i < draw.b; ++i) out.indices[draw.K * draw.b + i] = draw.swap_batch[i];
  out.gauss[draw.K] = draw.swap_gauss;
  return out;
}

void run_sgld_into(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                   const BatchDraw& draw, std::span<double> out) {
  check_draw(draw, cfg, model.size());
  if (out.size() != cfg.alpha + 1) throw ConfigError("output span must have alpha + 1 entries");
  const double scale = cfg.h / static_cast<double>(cfg.b);
  const double noise = noise_scale(cfg);
  double theta = c.theta_hat;
  out[0] = theta;
  for (std::size_t k = 0; k < cfg.alpha; ++k) {
    double g = 0.0;
    for (auto i : draw.batch(k)) g += gradient(model, i, theta);
    theta = theta + scale * g + noise * draw.gauss[k];
    if (!std::isfinite(theta)) throw DivergenceError("SG(L)D iterate is not finite", k + 1);
    out[k + 1] = theta;
  }
}

std::vector<double> run_sgld(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                             const BatchDraw& draw) {
  std::vector<double> out(cfg.alpha + 1);
  run_sgld_into(model, c, cfg, draw, out);
  return out;
}

void run_linearized_into(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw,
                         std::span<double> out) {
  check_draw(draw, cfg, c.size());
  if (out.size() != cfg.alpha + 1) throw ConfigError("output span must have alpha + 1 entries");
  const double scale = cfg.h / static_cast<double>(cfg.b);
  const double noise = noise_scale(cfg);
  double eta = 0.0;
  out[0] = eta;
  for (std::size_t k = 0; k < cfg.alpha; ++k) {
    const auto batch = draw.batch(k);
    const double g = batch_sum(c.psi, batch) - batch_sum(c.sigma, batch) * eta;
    eta = eta + scale * g + noise * draw.gauss[k];
    if (!std::isfinite(eta)) throw DivergenceError("linearized iterate is not finite", k + 1);
    out[k + 1] = eta;
  }
}

std::vector<double> run_linearized(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw) {
  std::vector<double> out(cfg.alpha + 1);
  run_linearized_into(c, cfg, draw, out);
  return out;
}

double q_product(std::span<const double> sigma, const BatchDraw& draw, std::size_t j, std::size_t k,
                 double h, std::size_t b) {
  if (j > draw.alpha || k > draw.alpha) throw ConfigError("q_product indices exceed alpha");
  double q = 1.0;
  const double scale = h / static_cast<double>(b);
  for (std::size_t m = j; m < k; ++m) q *= 1.0 - scale * batch_sum(sigma, draw.batch(m));
  return q;
}

std::vector<double> eta_closed_form(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw) {
  check_draw(draw, cfg, c.size());
  const std::size_t alpha = cfg.alpha;
  const double scale = cfg.h / static_cast<double>(cfg.b);
  const double noise = noise_scale(cfg);
  std::vector<double> factor(alpha), drive(alpha);
  for (std::size_t m = 0; m < alpha; ++m) {
    factor[m] = 1.0 - scale * batch_sum(c.sigma, draw.batch(m));
    drive[m] = scale * batch_sum(c.psi, draw.batch(m)) + noise * draw.gauss[m];
  }
  std::vector<double> eta(alpha + 1, 0.0);
  for (std::size_t k = 1; k <= alpha; ++k) {
    // Walk j downward so Q(j+1, k) grows by one factor per term.
    double q = 1.0;
    double sum = 0.0;
    for (std::size_t j = k; j-- > 0;) {
      sum += q * drive[j];
      q *= factor[j];
    }
    eta[k] = sum;
  }
  return eta;
}

std::vector<double> rescale(std::span<const double> iterates, double w, double center) {
  std::vector<double> out(iterates.size());
  for (std::size_t k = 0; k < iterates.size(); ++k) out[k] = w * (iterates[k] - center);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> exchangeable_pair(const ModelConstants& c,
                                                                      const AlgoConfig& cfg,
                                                                      const BatchDraw& draw) {
  const auto eta = run_linearized(c, cfg, draw);
  const auto eta_swap = run_linearized(c, cfg, swapped(draw));
  return {rescale(eta, cfg.w, 0.0), rescale(eta_swap, cfg.w, 0.0)};
}

std::vector<double> pair_difference_oracle(const ModelConstants& c, const AlgoConfig& cfg,
                                           const BatchDraw& draw) {
  const auto eta = run_linearized(c, cfg, draw);
  const std::size_t K = draw.K;
  if (K >= cfg.alpha) throw ConfigError("swap index K must be below alpha");
  const double scale = cfg.h / static_cast<double>(cfg.b);
  const auto batch = draw.batch(K);
  const std::span<const std::uint32_t> swap(draw.swap_batch);
  const double jump =
      scale * ((-batch_sum(c.sigma, batch) + batch_sum(c.sigma, swap)) * eta[K] + batch_sum(c.psi, batch) -
               batch_sum(c.psi, swap)) +
      noise_scale(cfg) * (draw.gauss[K] - draw.swap_gauss);

  std::vector<double> diff(cfg.alpha + 1, 0.0);
  double q = 1.0;  // Q(K+1, m)
  for (std::size_t m = K + 1; m <= cfg.alpha; ++m) {
    if (m > K + 1) q *= 1.0 - scale * batch_sum(c.sigma, draw.batch(m - 1));
    diff[m] = cfg.w * q * jump;
  }
  return diff;
}

PathEnsemble make_ensemble(std::size_t R, std::size_t alpha, double w, std::string label,
                           std::uint64_t seed, int threads, const RowGenerator& gen) {
  if (R < 1) throw ConfigError("ensemble needs at least one replicate");
  PathEnsemble ens;
  ens.replicates = R;
  ens.alpha = alpha;
  ens.w = w;
  ens.label = std::move(label);
  ens.seed_base = seed;
  try {
    ens.values.assign(R * (alpha + 1), 0.0);
  } catch (const std::bad_alloc&) {
    throw ConfigError("cannot allocate an ensemble of " + std::to_string(R) + " x " +
                      std::to_string(alpha + 1) + " values");
  }
  parallel_for(R, threads, [&](std::size_t r) {
    Rng rng = replicate_stream(seed, r);
    gen(r, rng, ens.row(r));
  });
  return ens;
}

PathEnsemble sgld_ensemble(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                           std::size_t R, int threads) {
  cfg.validate();
  return make_ensemble(R, cfg.alpha, cfg.w, "sgld", cfg.master_seed, threads,
                       [&](std::size_t, Rng& rng, std::span<double> row) {
                         const auto draw = draw_batches(model.size(), cfg.alpha, cfg.b, rng);
                         run_sgld_into(model, c, cfg, draw, row);
                         for (double& v : row) v = cfg.w * (v - c.theta_hat);
                       });
}

PathEnsemble linearized_ensemble(const ModelConstants& c, const AlgoConfig& cfg, std::size_t R,
                                 int threads) {
  cfg.validate();
  return make_ensemble(R, cfg.alpha, cfg.w, "linearized", cfg.master_seed, threads,
                       [&](std::size_t, Rng& rng, std::span<double> row) {
                         const auto draw = draw_batches(c.size(), cfg.alpha, cfg.b, rng);
                         run_linearized_into(c, cfg, draw, row);
                         for (double& v : row) v *= cfg.w;
                       });
}

}  // namespace sglimit
