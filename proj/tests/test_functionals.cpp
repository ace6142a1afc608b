#include <doctest.h>

#include <cmath>
#include <vector>

#include "sglimit/errors.hpp"
#include "sglimit/experiments.hpp"
#include "sglimit/functionals.hpp"
#include "sglimit/path_functional.hpp"
#include "sglimit/stats.hpp"

using namespace sglimit;

namespace {

// Var(int_0^1 Z_t dt) for z0 = 0, in closed form.
double avg_variance_oracle(double B, double A) {
  if (B < 1e-4) return A * (1.0 / 3.0 - B / 4.0 + 7.0 * B * B / 60.0);  // series, the closed form cancels
  const double e = std::exp(-B);
  const double m = (1 - e) / B;
  return A / (2 * B) * (2 / B - 2 * (1 - e) / (B * B) - m * m);
}

PathEnsemble brownian(std::size_t R, std::size_t alpha, double drift, double scale, double shift,
                      std::uint64_t seed) {
  return make_ensemble(R, alpha, 1.0, "bm", seed, 1, [&](std::size_t, Rng& rng, std::span<double> row) {
    double w = 0.0;
    row[0] = shift;
    for (std::size_t k = 1; k <= alpha; ++k) {
      w += std::sqrt(1.0 / alpha) * rng.normal();
      row[k] = shift + drift * double(k) / alpha + scale * w;
    }
  });
}

std::vector<double> grid(double lo, double step, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo + step * i);
  return g;
}

}  // namespace

TEST_CASE("evaluate examples") {
  const std::vector<double> zero(5, 0.0);
  CHECK(evaluate(g1(), zero) == 0.0);
  CHECK(evaluate(g2(), zero) == 0.0);
  const std::vector<double> cst(7, 1.75);
  CHECK(evaluate(g1(), cst) == 1.75);
  CHECK(evaluate(g2(), cst) == 1.75 * 1.75);
  const std::vector<double> p = {0.0, 0.3, -1.1};
  CHECK(evaluate(g1(), p) == doctest::Approx((0.3 - 1.1) / 2));
  CHECK_THROWS_AS(evaluate(g1(), std::vector<double>{}), ConfigError);
}

TEST_CASE("g1 linearity and g2 = g1 squared") {
  Rng r(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(17), y(17), z(17);
    const double a = r.normal(), b = r.normal();
    x[0] = y[0] = 0.0;
    for (std::size_t k = 1; k < 17; ++k) {
      x[k] = r.normal();
      y[k] = r.normal();
    }
    for (std::size_t k = 0; k < 17; ++k) z[k] = a * x[k] + b * y[k];
    CHECK(evaluate(g1(), z) == doctest::Approx(a * evaluate(g1(), x) + b * evaluate(g1(), y)).epsilon(1e-13));
    const double m = evaluate(g1(), x);
    CHECK(evaluate(g2(), x) == m * m);
  }
}

TEST_CASE("bounded functionals") {
  const std::vector<double> p = {0.0, 0.4, -1.7, 0.2, 0.9};  // alpha = 4
  CHECK(evaluate(clipped_sup(1.0), p) == 1.0);
  CHECK(evaluate(clipped_sup(5.0), p) == 1.7);
  CHECK(evaluate(eval_clip(0.5, 1.0), p) == -1.0);
  CHECK(evaluate(eval_clip(0.3, 1.0), p) == 0.4);
  CHECK(evaluate(eval_clip(1.0, 0.5), p) == 0.5);
  CHECK(evaluate(clipped_average(1.0, 1.0), p) == doctest::Approx((0.4 - 1.7 + 0.2 + 0.9) / 4));
  CHECK(clipped_sup(1.0).bw_certified());
  CHECK(eval_clip(0.5, 0.75).bw_certified());
  CHECK(clipped_average(1.0, 1.0).bw_certified());
  CHECK_FALSE(clipped_sup(2.0).bw_certified());
  CHECK_FALSE(g1().bw_certified());
  CHECK(g1().m_norm_bound == 1.53);
  CHECK(g2().m_norm_bound == 3.53);
  const auto s = scaled(g2(), 2.0);
  CHECK(s.m_norm_bound == 7.06);
  CHECK(evaluate(s, p) == 2.0 * evaluate(g2(), p));
}

TEST_CASE("functional_gap") {
  const auto a = brownian(10000, 16, 0.0, 1.0, 0.0, 1);
  const auto b = brownian(10000, 16, 0.0, 1.0, 0.0, 2);
  CHECK(functional_gap(a, a, g2()).value == 0.0);
  for (const auto& g : {g1(), g2()}) {
    const auto est = functional_gap(a, b, g);
    CHECK(est.value <= 4 * est.std_error);
    CHECK(est.replicates == 10000);
    // normalization: g and 2 g give the same value
    CHECK(functional_gap(a, b, scaled(g, 2.0)).value == est.value);
  }
  const auto c = brownian(100, 8, 0.0, 1.0, 0.0, 3);
  CHECK_THROWS_AS(functional_gap(a, c, g1()), ConfigError);
}

TEST_CASE("linear model: Y versus Zcal gap decays when h halves") {
  SynthSpec s;
  s.family = Family::Linear;
  s.n = 50;
  s.seed = 4;
  const auto m = synth_data(s);
  const auto c = model_constants(m);
  double prev = 1e300;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const auto cfg = AlgoConfig::numerical(h, 1, h, 4.0, 1.0, 1.0, 5);
    const auto pt = decomposed_gap_point(m, c, cfg, 200, 1);
    // linear model: Y and Ycal coincide, the paired part vanishes and the gap is exact
    CHECK(std::abs(pt.paired_g2.mean) <= 1e-12);
    CHECK(pt.gap_g2 < prev);
    prev = pt.gap_g2;
  }
}

TEST_CASE("Var of the OU average: quadrature against the closed form") {
  CHECK(ou_average_variance({1.0, 0.0, 0.0}) == 0.0);
  for (double B : {0.0, 1e-9, 0.3, 1.0, 4.0, 25.0}) {
    const OuParams p{B, 2.0, 0.0};
    const double lo = ou_average_variance(p, 512);
    const double hi = ou_average_variance(p, 1024);
    CHECK(std::abs(lo - hi) <= 1e-8 * hi);
    CHECK(hi == doctest::Approx(avg_variance_oracle(B, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("variance_gap report") {
  SynthSpec s;
  s.family = Family::Linear;
  s.n = 60;
  s.seed = 8;
  const auto m = synth_data(s);
  const auto c = model_constants(m);
  const auto cfg = AlgoConfig::numerical(1.0 / 32, 1, 1.0 / 32, 4.0, 1.0, 1.0, 6);
  const auto ens = sgld_ensemble(m, c, cfg, 4000, 1);
  const auto lp = limit_params(c, cfg);
  const auto rep = variance_gap(ens, lp, 0.1);
  CHECK(rep.var_z_analytic == doctest::Approx(avg_variance_oracle(lp.B, lp.A)).epsilon(1e-8));
  CHECK(rep.gap == doctest::Approx(std::abs(rep.var_y - rep.var_z_analytic)));
  CHECK(rep.rhs_bound == doctest::Approx((1.53 * std::abs(rep.mean_g1) + 3.53) * 0.1));
  // C_R = 0: the mean bound is zero, so the mean is zero within MC error
  CHECK(std::abs(rep.mean_g1) <= 4 * rep.mean_g1_se);
  CHECK(variance_gap(ens, {1.0, 0.0, 0.0}, 0.0).var_z_analytic == 0.0);
}

TEST_CASE("Levy-Prokhorov surrogate") {
  const auto eps = grid(0.05, 0.05, 19);  // 0.05 .. 0.95
  const auto a = brownian(300, 8, 0.0, 1e-3, 0.0, 1);
  auto est = levy_prokhorov_estimate(a, a, eps);
  CHECK(est.value == eps.front());
  CHECK(est.uses_resolution);
  CHECK_FALSE(est.censored);
  for (double c : {0.3, 0.6}) {
    const auto b = brownian(300, 8, 0.0, 1e-3, c, 1);
    est = levy_prokhorov_estimate(a, b, eps);
    CHECK(std::abs(est.value - c) <= 0.05 + 1e-12);
    CHECK(est.resolution == doctest::Approx(0.05));
  }
  const auto far = brownian(300, 8, 0.0, 1e-3, 2.0, 1);
  est = levy_prokhorov_estimate(a, far, eps);
  CHECK(est.censored);
  CHECK(est.value == eps.back());
  CHECK_THROWS_AS(levy_prokhorov_estimate(a, a, std::vector<double>{0.2, 0.1}), ConfigError);
}

TEST_CASE("bounded Wasserstein lower bound") {
  const auto dict = default_bw_dictionary();
  for (const auto& g : dict) CHECK(g.bw_certified());
  const auto a = brownian(5000, 16, 0.0, 1.0, 0.0, 1);
  CHECK(bounded_wasserstein_lower(a, a, dict).value == 0.0);
  double prev = -1.0, prev_se = 0.0;
  for (double mu : {0.5, 1.0, 2.0}) {
    const auto b = brownian(5000, 16, mu, 1.0, 0.0, 2);
    const auto est = bounded_wasserstein_lower(a, b, dict);
    CHECK(est.value <= 2.0);
    CHECK(est.value - prev > -2 * std::hypot(est.std_error, prev_se));
    CHECK(est.value > prev);
    prev = est.value;
    prev_se = est.std_error;
  }
  const auto far = brownian(500, 16, 0.0, 0.0, 50.0, 3);
  const auto near = brownian(500, 16, 0.0, 0.0, -50.0, 3);
  CHECK(bounded_wasserstein_lower(far, near, dict).value <= 2.0);
  CHECK(bounded_wasserstein_lower(far, near, dict).value == doctest::Approx(2.0));
  std::vector<PathFunctional> bad = {g1()};
  CHECK_THROWS_AS(bounded_wasserstein_lower(a, a, bad), ConfigError);
}

TEST_CASE("sup_distance") {
  CHECK(sup_distance(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1.5, 1}) == 1.0);
}
