#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace sglimit {

/// Parameters supplied directly by the caller.
struct RawSetting {};

/// Sample-size indexed tuning: h = 2 w1 b / n, beta = n / w2, alpha = m n / b,
/// w = sqrt(n). `epochs_c` is the constant c in the requirement m <= c sqrt(n).
struct StatisticalSetting {
  double w1 = 1.0;
  double w2 = 1.0;
  double m = 1.0;
  double epochs_c = 1.0;
  std::size_t n = 0;
};

/// Step-size indexed tuning: alpha = c1 / h, w = c2 min{sqrt(b/h), sqrt(beta)},
/// with b <= c3 h^-4.
struct NumericalSetting {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

using Setting = std::variant<RawSetting, StatisticalSetting, NumericalSetting>;

/// Tuning of one SG(L)D run and of its rescaled path Y_t = w (theta_{floor(alpha t)} - theta_hat).
struct AlgoConfig {
  double h = 0.0;             ///< step size
  std::size_t b = 1;          ///< batch size
  double beta_inv = 0.0;      ///< 1/beta; 0 encodes beta = infinity (plain SGD)
  std::size_t alpha = 1;      ///< steps covering [0, 1]
  double w = 1.0;             ///< spatial scaling
  std::uint64_t master_seed = 0;
  Setting setting = RawSetting{};
  double alpha_requested = 1.0;  ///< real-valued alpha before rounding (presets)

  /// Throws ConfigError unless h > 0, b >= 1, beta_inv >= 0, alpha >= 1, w > 0.
  void validate() const;

  /// The statistical preset for sample size n (alpha rounded to nearest, at least 1).
  static AlgoConfig statistical(std::size_t n, std::size_t b, double w1, double w2, double m,
                                double epochs_c, std::uint64_t seed);

  /// The numerical preset for step size h (alpha rounded to nearest, at least 1).
  static AlgoConfig numerical(double h, std::size_t b, double beta_inv, double c1, double c2,
                              double c3, std::uint64_t seed);
};

std::string setting_name(const Setting& s);

}  // namespace sglimit
