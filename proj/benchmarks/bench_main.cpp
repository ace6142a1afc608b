#include <benchmark/benchmark.h>

#include "sglimit/experiments.hpp"
#include "sglimit/ou_sim.hpp"
#include "sglimit/sgld_sim.hpp"

using namespace sglimit;

namespace {

struct Fixture {
  GlmModel model;
  ModelConstants constants;
  AlgoConfig cfg;
  BatchDraw draw;

  explicit Fixture(std::size_t alpha) {
    SynthSpec s;
    s.family = Family::Logistic;
    s.n = 200;
    s.c = 3.0;
    s.intercept = 1.0;
    s.seed = 1;
    model = synth_data(s);
    constants = model_constants(model);
    cfg = AlgoConfig::numerical(4.0 / static_cast<double>(alpha), 1, 4.0 / static_cast<double>(alpha), 4.0, 1.0,
                                1.0, 0);
    Rng rng(5);
    draw = draw_batches(model.size(), cfg.alpha, cfg.b, rng);
  }
};

void BM_RunSgld(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.cfg.alpha + 1);
  for (auto _ : state) {
    run_sgld_into(f.model, f.constants, f.cfg, f.draw, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cfg.alpha));
}
BENCHMARK(BM_RunSgld)->Arg(64)->Arg(2048);

void BM_RunLinearized(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.cfg.alpha + 1);
  for (auto _ : state) {
    run_linearized_into(f.constants, f.cfg, f.draw, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cfg.alpha));
}
BENCHMARK(BM_RunLinearized)->Arg(64)->Arg(2048);

void BM_EtaClosedForm(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eta_closed_form(f.constants, f.cfg, f.draw));
}
BENCHMARK(BM_EtaClosedForm)->Arg(64)->Arg(256);

void BM_DrawBatches(benchmark::State& state) {
  const auto alpha = static_cast<std::size_t>(state.range(0));
  BatchDraw d;
  Rng rng(3);
  for (auto _ : state) {
    draw_batches_into(d, 200, alpha, 1, rng);
    benchmark::DoNotOptimize(d.gauss.data());
  }
}
BENCHMARK(BM_DrawBatches)->Arg(2048);

void BM_SimulateOu(benchmark::State& state) {
  const auto alpha = static_cast<std::size_t>(state.range(0));
  const OuParams p{1.0, 2.0, 0.0};
  std::vector<double> out(alpha + 1);
  Rng rng(9);
  for (auto _ : state) {
    simulate_ou_exact_into(p, rng, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(alpha));
}
BENCHMARK(BM_SimulateOu)->Arg(500)->Arg(2048);

}  // namespace
BENCHMARK_MAIN();
