#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "sglimit/errors.hpp"
#include "sglimit/path_functional.hpp"
#include "sglimit/sgld_sim.hpp"
#include "sglimit/stats.hpp"
#include "test_helpers.hpp"

using namespace sglimit;
using namespace sglimit::testing;

namespace {

GlmModel linear_model(std::vector<double> x, std::vector<double> y) {
  GlmModel m;
  m.family = Family::Linear;
  m.x = std::move(x);
  m.y = std::move(y);
  return m;
}

AlgoConfig raw(double h, std::size_t b, double beta_inv, std::size_t alpha, double w = 1.0) {
  AlgoConfig c;
  c.h = h;
  c.b = b;
  c.beta_inv = beta_inv;
  c.alpha = alpha;
  c.w = w;
  return c;
}

}  // namespace

TEST_CASE("draw_batches is deterministic and consumes the declared layout") {
  Rng a(1), b(1);
  const auto d1 = draw_batches(10, 6, 3, a);
  const auto d2 = draw_batches(10, 6, 3, b);
  CHECK(d1.indices == d2.indices);
  CHECK(d1.gauss == d2.gauss);
  CHECK(d1.K == d2.K);
  CHECK(d1.indices.size() == 18);
  CHECK(d1.swap_batch.size() == 3);
  CHECK(d1.K < 6);
  for (auto i : d1.indices) CHECK(i < 10);
  CHECK(d1.index(2, 1) == d1.indices[7]);

  // layout: indices, then gauss, then K
  Rng c(1);
  for (int i = 0; i < 18; ++i) CHECK(c.index(10) == d1.indices[i]);
  for (int i = 0; i < 6; ++i) CHECK(c.normal() == d1.gauss[i]);
}

TEST_CASE("run_sgld examples") {
  // perfect-fit linear data: every psi_i = 0 and beta_inv = 0 keeps theta at theta_hat
  const auto m = linear_model({1, 2, -1}, {2, 4, -2});
  const auto c = model_constants(m);
  Rng r(4);
  const auto cfg = raw(0.1, 2, 0.0, 20);
  const auto th = run_sgld(m, c, cfg, draw_batches(3, 20, 2, r));
  for (double v : th) CHECK(v == c.theta_hat);

  // full batch by hand: one step moves by the noise term alone
  const auto m2 = linear_model({1, -1, 2}, {0.3, 0.8, -0.1});
  const auto c2 = model_constants(m2);
  BatchDraw d;
  d.alpha = 1;
  d.b = 3;
  d.indices = {0, 1, 2};
  d.gauss = {0.7};
  d.swap_batch = {0, 0, 0};
  const auto cfg2 = raw(0.1, 3, 0.05, 1);
  const auto th2 = run_sgld(m2, c2, cfg2, d);
  CHECK(th2[0] == c2.theta_hat);
  CHECK(th2[1] - c2.theta_hat == doctest::Approx(std::sqrt(2 * 0.1 * 0.05) * 0.7).epsilon(1e-12));
}

TEST_CASE("linear family: run_sgld equals run_linearized path for path") {
  Rng r(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_model(r, Family::Linear, 2 + r.index(40));
    const auto c = model_constants(m);
    const auto cfg = random_config(r, c, 1 + r.index(150));
    const auto d = draw_batches(m.size(), cfg.alpha, cfg.b, r);
    const auto th = run_sgld(m, c, cfg, d);
    const auto eta = run_linearized(c, cfg, d);
    for (std::size_t k = 0; k <= cfg.alpha; ++k) CHECK(std::abs((th[k] - c.theta_hat) - eta[k]) <= 1e-12);
  }
}

TEST_CASE("run_linearized examples") {
  const auto c = constants_from(0.0, {0.5, -1.0, 0.25}, {0.0, 0.0, 0.0}, 0.0);
  Rng r(2);
  const auto cfg = raw(0.2, 2, 0.1, 10);
  const auto d = draw_batches(3, 10, 2, r);
  const auto eta = run_linearized(c, cfg, d);
  const double noise = std::sqrt(2 * 0.2 * 0.1);
  const double eta1 = 0.2 / 2 * (c.psi[d.index(0, 0)] + c.psi[d.index(0, 1)]) + noise * d.gauss[0];
  CHECK(eta[1] == doctest::Approx(eta1).epsilon(1e-14));
  // sigma = 0: a random walk of the drive terms
  double walk = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    walk += 0.1 * (c.psi[d.index(k, 0)] + c.psi[d.index(k, 1)]) + noise * d.gauss[k];
    CHECK(eta[k + 1] == doctest::Approx(walk).epsilon(1e-12));
  }
}

TEST_CASE("q_product examples and range") {
  Rng r(6);
  const auto d = draw_batches(4, 5, 2, r);
  const std::vector<double> s(4, 0.8);
  CHECK(q_product(s, d, 3, 3, 0.1, 2) == 1.0);
  CHECK(q_product(s, d, 4, 2, 0.1, 2) == 1.0);
  CHECK(q_product(s, d, 0, 2, 0.1, 2) == doctest::Approx((1 - 0.1 * 0.8) * (1 - 0.1 * 0.8)));
  const double L = 1.7, h = 1.0 / (2.0 * L);
  const std::vector<double> sl(4, L);
  const double q = q_product(sl, d, 1, 4, h, 2);
  CHECK(q == doctest::Approx(std::pow(1 - h * L, 3)));
  CHECK(q > 0.0);
  CHECK(q < 1.0);

  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_model(r, family_at(trial), 2 + r.index(30));
    const auto c = model_constants(m);
    const auto cfg = random_config(r, c, 30);
    const auto dd = draw_batches(m.size(), cfg.alpha, cfg.b, r);
    for (int k = 0; k < 20; ++k) {
      const std::size_t j = r.index(31), kk = r.index(31);
      const double v = q_product(c.sigma, dd, j, kk, cfg.h, cfg.b);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("eta_closed_form equals the recursion") {
  Rng r(10);
  const auto c0 = constants_from(0.0, {0.3, -0.3}, {1.0, 0.5}, 0.0);
  const auto cfg0 = raw(0.1, 1, 0.1, 3);
  const auto d0 = draw_batches(2, 3, 1, r);
  const auto e0 = eta_closed_form(c0, cfg0, d0);
  CHECK(e0[0] == 0.0);
  CHECK(e0[1] == doctest::Approx(run_linearized(c0, cfg0, d0)[1]).epsilon(1e-15));

  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(r, family_at(trial), 2 + r.index(49));
    const auto c = model_constants(m);
    const auto cfg = random_config(r, c, trial % 2 ? 50 : 1 + r.index(200));
    const auto d = draw_batches(m.size(), cfg.alpha, cfg.b, r);
    CHECK(max_rel_error(eta_closed_form(c, cfg, d), run_linearized(c, cfg, d)) <= 1e-10);
  }
}

TEST_CASE("rescale examples") {
  CHECK(rescale(std::vector<double>{0, 0, 0}, 3.0, 0.0) == std::vector<double>{0, 0, 0});
  CHECK(rescale(std::vector<double>{1.5, 2.0}, 1.0, 1.5) == std::vector<double>{0.0, 0.5});
  const auto cfg = AlgoConfig::statistical(64, 1, 0.5, 1.0, 1.0, 1.0, 0);
  CHECK(rescale(std::vector<double>{1.0, 1.25}, cfg.w, 1.0)[1] == doctest::Approx(8.0 * 0.25));
}

TEST_CASE("exchangeable pair and difference oracle") {
  Rng r(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(r, family_at(trial), 2 + r.index(40));
    const auto c = model_constants(m);
    const auto cfg = random_config(r, c, 1 + r.index(100));
    const auto d = draw_batches(m.size(), cfg.alpha, cfg.b, r);
    const auto [y, yp] = exchangeable_pair(c, cfg, d);
    const auto diff = pair_difference_oracle(c, cfg, d);
    for (std::size_t k = 0; k <= cfg.alpha; ++k) {
      const double direct = y[k] - yp[k];
      CHECK(std::abs(diff[k] - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
      if (k <= d.K) {
        CHECK(direct == 0.0);
        CHECK(diff[k] == 0.0);
      }
    }
  }
}

TEST_CASE("exchangeable pair examples") {
  Rng r(13);
  const auto c = constants_from(0.0, {0.4, -0.4, 0.1, -0.1}, {0.5, 0.9, 0.2, 0.4}, 0.0);
  const auto cfg = raw(0.2, 2, 0.05, 6, 1.5);
  auto d = draw_batches(4, 6, 2, r);
  // identical replacement
  for (std::size_t i = 0; i < 2; ++i) d.swap_batch[i] = d.index(d.K, i);
  d.swap_gauss = d.gauss[d.K];
  auto [y, yp] = exchangeable_pair(c, cfg, d);
  CHECK(y == yp);
  for (double v : pair_difference_oracle(c, cfg, d)) CHECK(v == 0.0);

  // K = alpha - 1: only the last grid value differs
  d.K = 5;
  d.swap_batch = {0, 0};
  d.swap_gauss = d.gauss[5] + 1.0;
  std::tie(y, yp) = exchangeable_pair(c, cfg, d);
  for (std::size_t k = 0; k < 6; ++k) CHECK(y[k] == yp[k]);
  CHECK(y[6] != yp[6]);
}

TEST_CASE("pair difference on a hand-set two-step linear draw") {
  // Linear model: sigma_i = x_i^2, psi_i = (y_i - theta_hat x_i) x_i.
  const auto m = linear_model({1.0, 2.0}, {1.0, 1.0});
  const auto c = model_constants(m);
  CHECK(c.sigma[0] == doctest::Approx(1.0));
  CHECK(c.sigma[1] == doctest::Approx(4.0));
  const double th = c.theta_hat;  // 3/5
  const double psi0 = (1 - th) * 1, psi1 = (1 - 2 * th) * 2;
  BatchDraw d;
  d.alpha = 2;
  d.b = 1;
  d.indices = {0, 1};
  d.gauss = {0.5, -0.25};
  d.K = 0;
  d.swap_batch = {1};
  d.swap_gauss = 1.0;
  const double h = 0.1, bi = 0.02, w = 2.0, nz = std::sqrt(2 * h * bi);
  const auto cfg = raw(h, 1, bi, 2, w);
  // by hand: eta_1 = h psi0 + nz*0.5; eta'_1 = h psi1 + nz*1.0; eta_2 = eta_1 + h(psi1 - 4 eta_1) + nz*(-0.25)
  const double e1 = h * psi0 + nz * 0.5;
  const double e1p = h * psi1 + nz * 1.0;
  const double e2 = e1 + h * (psi1 - 4 * e1) - 0.25 * nz;
  const double e2p = e1p + h * (psi1 - 4 * e1p) - 0.25 * nz;
  const auto diff = pair_difference_oracle(c, cfg, d);
  CHECK(diff[0] == 0.0);
  CHECK(diff[1] == doctest::Approx(w * (e1 - e1p)).epsilon(1e-13));
  CHECK(diff[2] == doctest::Approx(w * (e2 - e2p)).epsilon(1e-13));
}

TEST_CASE("pair symmetry in distribution and zero-mean g1 difference") {
  Rng r(14);
  const auto m = random_model(r, Family::Logistic, 30);
  const auto c = model_constants(m);
  const auto cfg = random_config(r, c, 40);
  const std::size_t R = 10000;
  std::vector<double> g1diff(R), sdiff(R);
  for (std::size_t i = 0; i < R; ++i) {
    Rng rr = replicate_stream(99, i);
    const auto d = draw_batches(m.size(), cfg.alpha, cfg.b, rr);
    const auto [y, yp] = exchangeable_pair(c, cfg, d);
    const double a = iterate_average(y), b = iterate_average(yp);
    g1diff[i] = a - b;
    sdiff[i] = std::tanh(a - 2 * b) - std::tanh(b - 2 * a);
  }
  const auto e1 = estimate_mean(g1diff);
  const auto e2 = estimate_mean(sdiff);
  CHECK(std::abs(e1.mean) <= 4 * e1.std_error);
  CHECK(std::abs(e2.mean) <= 4 * e2.std_error);
}

TEST_CASE("ensembles: R = 1, thread independence, distinct seeds") {
  Rng r(15);
  const auto m = random_model(r, Family::Poisson, 20);
  const auto c = model_constants(m);
  auto cfg = random_config(r, c, 25);

  const auto one = sgld_ensemble(m, c, cfg, 1, 1);
  Rng rr = replicate_stream(cfg.master_seed, 0);
  const auto d = draw_batches(m.size(), cfg.alpha, cfg.b, rr);
  const auto direct = rescale(run_sgld(m, c, cfg, d), cfg.w, c.theta_hat);
  CHECK(std::vector<double>(one.values) == direct);
  CHECK(one.label == "sgld");
  CHECK(one.row(0)[0] == 0.0);

  const auto e1 = sgld_ensemble(m, c, cfg, 64, 1);
  const auto e8 = sgld_ensemble(m, c, cfg, 64, 8);
  CHECK(e1.values == e8.values);
  const auto l1 = linearized_ensemble(c, cfg, 64, 1);
  const auto l8 = linearized_ensemble(c, cfg, 64, 8);
  CHECK(l1.values == l8.values);

  cfg.master_seed += 1;
  const auto other = sgld_ensemble(m, c, cfg, 64, 1);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < 64; ++i) differing += other.row(i)[1] != e1.row(i)[1];
  CHECK(differing == 64);
  CHECK_THROWS_AS(sgld_ensemble(m, c, cfg, 0, 1), ConfigError);
}

TEST_CASE("divergence aborts with the step index") {
  GlmModel m;
  m.family = Family::Poisson;
  m.x = {30.0, -30.0};
  m.y = {1.0, 1.0};
  m.has_domain = true;
  m.domain_lo = -1;
  m.domain_hi = 1;
  const auto c = model_constants(m);
  AlgoConfig cfg;
  cfg.h = 5.0;
  cfg.b = 1;
  cfg.alpha = 100;
  cfg.beta_inv = 1.0;
  Rng r(1);
  const auto d = draw_batches(2, 100, 1, r);
  try {
    run_sgld(m, c, cfg, d);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() <= 100);
  }
}

TEST_CASE("draws that do not match the configuration are rejected") {
  Rng r(1);
  const auto c = constants_from(0.0, {0.1, -0.1}, {1.0, 1.0}, 0.0);
  const auto d = draw_batches(2, 5, 1, r);
  CHECK_THROWS_AS(run_linearized(c, raw(0.1, 1, 0.0, 6), d), ConfigError);
  CHECK_THROWS_AS(run_linearized(c, raw(0.1, 2, 0.0, 5), d), ConfigError);
}
