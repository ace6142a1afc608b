#pragma once

// Random models and configurations for property tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sglimit/algo_config.hpp"
#include "sglimit/errors.hpp"
#include "sglimit/experiments.hpp"
#include "sglimit/loss_models.hpp"
#include "sglimit/rng.hpp"

namespace sglimit::testing {

inline Family family_at(int i) {
  static const Family fs[] = {Family::Linear, Family::Logistic, Family::Poisson};
  return fs[i % 3];
}

/// Synthetic model with n observations; retries until the critical point exists.
inline GlmModel random_model(Rng& rng, Family f, std::size_t n) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    SynthSpec s;
    s.family = f;
    s.n = n;
    s.c = 0.5 + 1.5 * rng.uniform();
    s.theta_true = rng.uniform() - 0.5;
    s.intercept = 0.5 * (rng.uniform() - 0.5);
    s.noise_sd = 0.5;
    s.seed = rng.next();
    try {
      auto m = synth_data(s);
      (void)fit_critical_point(m);
      return m;
    } catch (const ConfigError&) {
    }
  }
  throw ConfigError("random_model: no usable data set");
}

/// Raw configuration satisfying h < 1/(2L).
inline AlgoConfig random_config(Rng& rng, const ModelConstants& c, std::size_t alpha, std::size_t max_b = 4) {
  AlgoConfig cfg;
  cfg.h = (0.05 + 0.9 * rng.uniform()) / (2.0 * c.L);
  cfg.b = 1 + rng.index(static_cast<std::uint32_t>(max_b));
  cfg.beta_inv = rng.uniform() < 0.25 ? 0.0 : 0.2 * rng.uniform();
  cfg.alpha = alpha;
  cfg.alpha_requested = static_cast<double>(alpha);
  cfg.w = 0.5 + 2.0 * rng.uniform();
  cfg.master_seed = rng.next();
  return cfg;
}

/// max_k |a_k - b_k| / max(|b_k|, floor)
inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-12) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]) / std::max(std::abs(b[k]), floor));
  }
  return worst;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string fresh_dir(const std::string& path) {
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path;
}

}  // namespace sglimit::testing
