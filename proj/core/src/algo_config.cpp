#include "sglimit/algo_config.hpp"

#include <algorithm>
#include <cmath>

#include "sglimit/errors.hpp"

namespace sglimit {

void AlgoConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("step size h must be positive and finite");
  if (b < 1) throw ConfigError("batch size b must be at least 1");
  if (!(beta_inv >= 0.0) || !std::isfinite(beta_inv)) {
    throw ConfigError("beta_inv must be finite and nonnegative");
  }
  if (alpha < 1) throw ConfigError("alpha must be at least 1");
  if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("w must be positive and finite");
}

AlgoConfig AlgoConfig::statistical(std::size_t n, std::size_t b, double w1, double w2, double m,
                                   double epochs_c, std::uint64_t seed) {
  if (n < 1 || b < 1) throw ConfigError("statistical preset needs n >= 1 and b >= 1");
  if (!(w1 > 0.0) || !(w2 > 0.0) || !(m > 0.0)) {
    throw ConfigError("statistical preset needs w1, w2, m > 0");
  }
  if (!(epochs_c > 0.0) || m > epochs_c * std::sqrt(static_cast<double>(n))) {
    throw ConfigError("statistical preset requires m <= c sqrt(n)");
  }
  const auto nd = static_cast<double>(n);
  const auto bd = static_cast<double>(b);
  AlgoConfig cfg;
  cfg.h = 2.0 * w1 * bd / nd;
  cfg.b = b;
  cfg.beta_inv = w2 / nd;
  cfg.alpha_requested = m * nd / bd;
  cfg.alpha = static_cast<std::size_t>(std::max(1.0, std::round(cfg.alpha_requested)));
  cfg.w = std::sqrt(nd);
  cfg.master_seed = seed;
  cfg.setting = StatisticalSetting{w1, w2, m, epochs_c, n};
  cfg.validate();
  return cfg;
}

AlgoConfig AlgoConfig::numerical(double h, std::size_t b, double beta_inv, double c1, double c2,
                                 double c3, std::uint64_t seed) {
  if (!(h > 0.0)) throw ConfigError("numerical preset needs h > 0");
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c3 > 0.0)) {
    throw ConfigError("numerical preset needs c1, c2, c3 > 0");
  }
  if (static_cast<double>(b) > c3 / (h * h * h * h)) {
    throw ConfigError("numerical preset requires b <= c3 h^-4");
  }
  AlgoConfig cfg;
  cfg.h = h;
  cfg.b = b;
  cfg.beta_inv = beta_inv;
  cfg.alpha_requested = c1 / h;
  cfg.alpha = static_cast<std::size_t>(std::max(1.0, std::round(cfg.alpha_requested)));
  const double batch_scale = std::sqrt(static_cast<double>(b) / h);
  const double temp_scale =
      beta_inv > 0.0 ? std::sqrt(1.0 / beta_inv) : std::numeric_limits<double>::infinity();
  cfg.w = c2 * std::min(batch_scale, temp_scale);
  cfg.master_seed = seed;
  cfg.setting = NumericalSetting{c1, c2, c3};
  cfg.validate();
  return cfg;
}

std::string setting_name(const Setting& s) {
  if (std::holds_alternative<StatisticalSetting>(s)) return "statistical";
  if (std::holds_alternative<NumericalSetting>(s)) return "numerical";
  return "raw";
}

}  // namespace sglimit
