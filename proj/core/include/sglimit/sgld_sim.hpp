#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/loss_models.hpp"
#include "sglimit/rng.hpp"

namespace sglimit {

/// All randomness of one run: batch indices I(k, i), noise xi_k, and the
/// replacement (K, I'(K, .), xi'_K) used by the exchangeable pair.
struct BatchDraw {
  std::size_t alpha = 0;
  std::size_t b = 0;
  std::vector<std::uint32_t> indices;  ///< row-major alpha x b, zero-based
  std::vector<double> gauss;           ///< length alpha
  std::size_t K = 0;
  std::vector<std::uint32_t> swap_batch;  ///< length b
  double swap_gauss = 0.0;

  std::uint32_t index(std::size_t k, std::size_t i) const { return indices[k * b + i]; }
  std::span<const std::uint32_t> batch(std::size_t k) const {
    return {indices.data() + k * b, b};
  }
};

/// Consumes the stream in a fixed order: indices row by row, then gauss, then
/// K, swap_batch and swap_gauss.
BatchDraw draw_batches(std::size_t n, std::size_t alpha, std::size_t b, Rng& rng);
void draw_batches_into(BatchDraw& draw, std::size_t n, std::size_t alpha, std::size_t b, Rng& rng);

/// The draw with row K and xi_K replaced by the swap values.
BatchDraw swapped(const BatchDraw& draw);

/// theta_0..theta_alpha from theta_0 = theta_hat. Throws DivergenceError on a non-finite iterate.
std::vector<double> run_sgld(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                             const BatchDraw& draw);
void run_sgld_into(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                   const BatchDraw& draw, std::span<double> out);

/// eta_0..eta_alpha (centered) of the linearized recursion.
std::vector<double> run_linearized(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw);
void run_linearized_into(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw,
                         std::span<double> out);

/// Q(j, k) = prod_{m=j}^{k-1} (1 - (h/b) sum_i sigma_{I(m,i)}), 1 when j >= k.
double q_product(std::span<const double> sigma, const BatchDraw& draw, std::size_t j, std::size_t k,
                 double h, std::size_t b);

/// eta_k = sum_{j<k} Q(j+1, k) ((h/b) sum_i psi_{I(j,i)} + sqrt(2 h beta_inv) xi_j).
std::vector<double> eta_closed_form(const ModelConstants& c, const AlgoConfig& cfg, const BatchDraw& draw);

/// w (iterates - center), the grid values of the rescaled path.
std::vector<double> rescale(std::span<const double> iterates, double w, double center);

/// (Ycal, Ycal') rows sharing every draw except step K.
std::pair<std::vector<double>, std::vector<double>> exchangeable_pair(const ModelConstants& c,
                                                                      const AlgoConfig& cfg,
                                                                      const BatchDraw& draw);

/// Ycal - Ycal' from the closed-form difference of the two recursions.
std::vector<double> pair_difference_oracle(const ModelConstants& c, const AlgoConfig& cfg,
                                           const BatchDraw& draw);

/// R replicate paths on the grid {k/alpha}, row-major R x (alpha + 1).
struct PathEnsemble {
  std::size_t replicates = 0;
  std::size_t alpha = 0;
  double w = 1.0;
  std::string label;
  std::uint64_t seed_base = 0;
  std::vector<double> values;

  std::size_t width() const { return alpha + 1; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * width(), width()}; }
  std::span<double> row(std::size_t r) { return {values.data() + r * width(), width()}; }
};

using RowGenerator = std::function<void(std::size_t r, Rng& rng, std::span<double> row)>;

/// Row r is produced by gen(r, replicate_stream(seed, r), row); deterministic in seed
/// for any thread count. The full array is allocated before any simulation.
PathEnsemble make_ensemble(std::size_t R, std::size_t alpha, double w, std::string label,
                           std::uint64_t seed, int threads, const RowGenerator& gen);

/// Ensembles of Y (SG(L)D) and Ycal (linearized). Equal seeds give shared draws.
PathEnsemble sgld_ensemble(const GlmModel& model, const ModelConstants& c, const AlgoConfig& cfg,
                           std::size_t R, int threads);
PathEnsemble linearized_ensemble(const ModelConstants& c, const AlgoConfig& cfg, std::size_t R,
                                 int threads);

}  // namespace sglimit
