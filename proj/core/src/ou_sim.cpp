#include "sglimit/ou_sim.hpp"

#include <algorithm>
#include <cmath>

#include "sglimit/errors.hpp"
#include "sglimit/parallel.hpp"
#include "sglimit/stats.hpp"

namespace sglimit {

void OuParams::validate() const {
  if (!(A >= 0.0) || !std::isfinite(A)) throw ConfigError("OU parameter A must be finite and nonnegative");
  if (!(B >= 0.0) || !std::isfinite(B)) throw ConfigError("OU parameter B must be finite and nonnegative");
  if (!std::isfinite(z0)) throw ConfigError("OU initial value must be finite");
}

OuParams limit_params(const ModelConstants& c, const AlgoConfig& cfg) {
  const double alpha = static_cast<double>(cfg.alpha);
  const double b = static_cast<double>(cfg.b);
  OuParams p;
  p.B = alpha * cfg.h * c.SigmaInfo;
  p.A = cfg.w * cfg.w * (alpha * cfg.h * cfg.h * c.Omega / b + 2.0 * alpha * cfg.h * cfg.beta_inv);
  p.z0 = 0.0;
  return p;
}

double ou_transition_variance_exact_branch(double A, double B, double dt) {
  return A * -std::expm1(-2.0 * B * dt) / (2.0 * B);
}

double ou_transition_variance_series_branch(double A, double B, double dt) {
  const double x = B * dt;
  return A * dt * (1.0 - x + (2.0 / 3.0) * x * x);
}

OuTransition ou_transition(const OuParams& p, double dt) {
  OuTransition tr;
  tr.decay = std::exp(-p.B * dt);
  tr.variance = p.B * dt < kSmallDecayThreshold ? ou_transition_variance_series_branch(p.A, p.B, dt)
                                                : ou_transition_variance_exact_branch(p.A, p.B, dt);
  return tr;
}

void simulate_ou_exact_into(const OuParams& p, Rng& rng, std::span<double> out) {
  if (out.size() < 2) throw ConfigError("OU path needs alpha >= 1");
  const auto tr = ou_transition(p, 1.0 / static_cast<double>(out.size() - 1));
  const double sd = std::sqrt(tr.variance);
  double z = p.z0;
  out[0] = z;
  for (std::size_t k = 1; k < out.size(); ++k) {
    z = tr.decay * z + sd * rng.normal();
    out[k] = z;
  }
}

std::vector<double> simulate_ou_exact(const OuParams& p, std::size_t alpha, Rng& rng) {
  p.validate();
  if (alpha < 1) throw ConfigError("OU path needs alpha >= 1");
  std::vector<double> out(alpha + 1);
  simulate_ou_exact_into(p, rng, out);
  return out;
}

double discretized_ou(std::span<const double> path, double t) {
  if (path.size() < 2) throw ConfigError("OU path needs alpha >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("time must lie in [0, 1]");
  const std::size_t alpha = path.size() - 1;
  const auto k = std::min(alpha, static_cast<std::size_t>(std::floor(t * static_cast<double>(alpha))));
  return path[k];
}

double ou_covariance(const OuParams& p, double t, double s) {
  const double lo = std::min(t, s);
  if (p.B == 0.0) return p.A * lo;
  // A/(2B) (e^{-B|t-s|} - e^{-B(t+s)}) written without cancellation
  return p.A * std::exp(-p.B * std::abs(t - s)) * -std::expm1(-2.0 * p.B * lo) / (2.0 * p.B);
}

std::pair<std::vector<double>, std::vector<double>> coupled_ou_pair(const OuParams& p1, const OuParams& p2,
                                                                    std::size_t alpha, Rng& rng) {
  p1.validate();
  p2.validate();
  if (alpha < 1) throw ConfigError("OU path needs alpha >= 1");
  const double dt = 1.0 / static_cast<double>(alpha);
  const auto t1 = ou_transition(p1, dt);
  const auto t2 = ou_transition(p2, dt);
  const double sd1 = std::sqrt(t1.variance);
  const double sd2 = std::sqrt(t2.variance);
  std::vector<double> a(alpha + 1), b(alpha + 1);
  a[0] = p1.z0;
  b[0] = p2.z0;
  for (std::size_t k = 1; k <= alpha; ++k) {
    const double xi = rng.normal();
    a[k] = t1.decay * a[k - 1] + sd1 * xi;
    b[k] = t2.decay * b[k - 1] + sd2 * xi;
  }
  return {std::move(a), std::move(b)};
}

PathEnsemble ou_ensemble(const OuParams& p, std::size_t alpha, std::size_t R, std::uint64_t seed,
                         int threads, const std::string& label) {
  p.validate();
  if (alpha < 1) throw ConfigError("OU path needs alpha >= 1");
  return make_ensemble(R, alpha, 1.0, "ou_" + label, seed, threads,
                       [&](std::size_t, Rng& rng, std::span<double> row) { simulate_ou_exact_into(p, rng, row); });
}

double max_inequality_rhs(double a, double A, double gamma, double p) {
  if (!(a > 0.0) || !(A >= 0.0) || !(gamma > 0.0) || !(p > 0.0)) {
    throw ConfigError("maximal inequality needs a > 0, A >= 0, gamma > 0, p > 0");
  }
  // e^{-2as}(gamma + int_0^s q^2) = gamma e^{-2as} + A (1 - e^{-2as}) / (2a) is monotone in s,
  // so its supremum over [0, 1] sits at an endpoint.
  const double decay = std::exp(-2.0 * a);
  const double at_one = gamma * decay + A * (1.0 - decay) / (2.0 * a);
  const double sup_term = std::max(gamma, at_one);
  const double total = A * std::expm1(2.0 * a) / (2.0 * a);
  const double ratio = total / gamma;
  const double log_term = std::log(1.0 + ratio + std::log1p(ratio));
  return std::pow(sup_term, p / 2.0) * std::pow(log_term, p / 2.0);
}

MaxIneqResult maximal_inequality_experiment(const MaxIneqSpec& spec, std::uint64_t seed, int threads) {
  if (spec.replicates < 100) throw ConfigError("maximal inequality experiment needs at least 100 replicates");
  if (spec.grid_size < 1) throw ConfigError("maximal inequality grid must have at least one step");
  MaxIneqResult res;
  res.replicates = spec.replicates;
  res.rhs_no_cp = max_inequality_rhs(spec.a, spec.A, spec.gamma, spec.p);

  const OuParams ou{spec.a, spec.A, 0.0};
  std::vector<double> sup_p(spec.replicates);
  parallel_for(spec.replicates, threads, [&](std::size_t r) {
    Rng rng = replicate_stream(seed, r);
    std::vector<double> path(spec.grid_size + 1);
    simulate_ou_exact_into(ou, rng, path);
    double m = 0.0;
    for (double v : path) m = std::max(m, std::abs(v));
    sup_p[r] = std::pow(m, spec.p);
  });
  const auto est = estimate_mean(sup_p);
  res.lhs_mc = est.mean;
  res.std_error = est.std_error;
  res.implied_Cp = res.rhs_no_cp > 0.0 ? res.lhs_mc / res.rhs_no_cp : 0.0;
  return res;
}

DistanceEstimate ou_to_ou_gap_mc(const OuParams& p1, const OuParams& p2, const PathFunctional& g,
                                 std::size_t alpha, std::size_t R, std::uint64_t seed, int threads) {
  if (R < 2) throw ConfigError("ou_to_ou_gap_mc needs R >= 2");
  std::vector<double> diff(R);
  parallel_for(R, threads, [&](std::size_t r) {
    Rng rng = replicate_stream(seed, r);
    const auto [z, zt] = coupled_ou_pair(p1, p2, alpha, rng);
    diff[r] = evaluate(g, z) - evaluate(g, zt);
  });
  const auto est = estimate_mean(diff);
  DistanceEstimate out;
  out.value = std::abs(est.mean);
  out.std_error = est.std_error;
  out.replicates = R;
  out.method = "ou_coupled_" + g.name();
  return out;
}

}  // namespace sglimit
