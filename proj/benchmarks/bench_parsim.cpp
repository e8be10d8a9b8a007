#include <benchmark/benchmark.h>

#include "parsim/arx.hpp"
#include "parsim/data_blocks.hpp"
#include "parsim/estimators.hpp"
#include "parsim/realization.hpp"
#include "parsim/signals.hpp"
#include "parsim/systems.hpp"

namespace {

using namespace parsim;

SignalRecord example1_record(Index n) {
  const StateSpaceModel sys = bench::example1_system();
  SignalRecord rec;
  rec.u = bench::white_noise(n, 1.0, bench::derive_seed(7, 1));
  const Vector e = bench::white_noise(n, sys.sigma_e2(), bench::derive_seed(7, 2));
  rec.y = simulate(sys, rec.u, e);
  return rec;
}

void BM_WlsRow(benchmark::State& state) {
  const Index cols = state.range(0);
  const Matrix z = Matrix::Random(40, cols);
  const RowVector y = RowVector::Random(cols);
  Vector h(9);
  h << 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1;
  const NoiseToeplitz t = build_noise_toeplitz(h, 10, cols);
  for (auto _ : state) benchmark::DoNotOptimize(wls_row(z, y, t));
}
BENCHMARK(BM_WlsRow)->Arg(1000)->Arg(4000);

void BM_ArxFit(benchmark::State& state) {
  const SignalRecord rec = example1_record(2000);
  for (auto _ : state) benchmark::DoNotOptimize(fit_arx(rec, state.range(0)));
}
BENCHMARK(BM_ArxFit)->Arg(10)->Arg(30);

void BM_Bank(benchmark::State& state) {
  const SignalRecord rec = example1_record(2000);
  const DataBlocks blocks = assemble_blocks(rec, 10, 20);
  const InnovationsMarkov h = predictor_to_innovations(fit_arx(rec, 20));
  const bool weighted = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted ? parsim_wls(blocks, h) : parsim_ols(blocks));
  }
  state.SetLabel(weighted ? "parsim_opt" : "parsim");
}
BENCHMARK(BM_Bank)->Arg(0)->Arg(1);

void BM_Identify(benchmark::State& state) {
  const SignalRecord rec = example1_record(2000);
  RealizationConfig cfg;
  cfg.order = 3;
  cfg.f = 10;
  cfg.method = static_cast<Method>(state.range(0));
  if (state.range(1) > 0) cfg.p = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(identify(rec, cfg));
  state.SetLabel(std::string(method_name(cfg.method)));
}
BENCHMARK(BM_Identify)
    ->Args({static_cast<long>(Method::parsim), 20})
    ->Args({static_cast<long>(Method::parsim_opt), 20})
    ->Args({static_cast<long>(Method::parsim_opt), 0})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
