#include <benchmark/benchmark.h>

#include "delaycert/freqcheck.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/simulate.hpp"
#include "delaycert/spectrum.hpp"
#include "delaycert/transfer.hpp"

using namespace delaycert;

namespace {

void BM_EvalTransfer(benchmark::State& state) {
  const auto model = goodwin::build(1.0, 0.8, 0.4);
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_transfer(model.system, Complex(0.0, w)));
    w += 1e-3;
  }
}
BENCHMARK(BM_EvalTransfer);

void BM_EvalTransferDistributed(benchmark::State& state) {
  const Matrix m = Matrix::Identity(2, 2) * -0.3;
  const DelaySystem sys(1.0, DelayMeasure(2, 2, {{0.0, -Matrix::Identity(2, 2)}}, {{-1.0, 0.0, {m, m}}}),
                        Matrix::Identity(2, 1), DelayMeasure::point(-1.0, Matrix::Ones(1, 2)));
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_transfer(sys, Complex(-0.1, w)));
    w += 1e-3;
  }
}
BENCHMARK(BM_EvalTransferDistributed);

void BM_CountRoots(benchmark::State& state) {
  const auto model = goodwin::build(2.0, 0.7, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(count_roots_right_of(model.system, 0.0));
}
BENCHMARK(BM_CountRoots)->Unit(benchmark::kMillisecond);

void BM_CircleSweep(benchmark::State& state) {
  const double rho = 0.3;
  const auto model = goodwin::build(2.0, 0.9, rho);
  SweepOptions options;
  options.nodes = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(circle_frequency(model.system, goodwin_min_slope() + rho, rho, 0.0, options));
}
BENCHMARK(BM_CircleSweep)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_GoodwinPoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(goodwin::certify(1.0, 0.9, {}));
}
BENCHMARK(BM_GoodwinPoint)->Unit(benchmark::kMillisecond);

void BM_IntegrateGoodwin(benchmark::State& state) {
  const auto model = goodwin::build(1.0, 0.9, 0.0);
  IntegrateOptions options;
  options.t_end = 60.0;
  options.step = 0.01;
  const History history = random_history(3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(model.system, model.nonlinearity, history, options));
}
BENCHMARK(BM_IntegrateGoodwin)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
