// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "diracfc/apps.hpp"
#include "diracfc/funcalc.hpp"
#include "diracfc/gridops.hpp"
#include "diracfc/hodge.hpp"
#include "diracfc/quadest.hpp"

using namespace diracfc;

namespace {

PiBSystem randomSystem(int n, int m) {
  const GridSpec g{n, m, 1.0};
  const auto b = randomAccretive(g, FiberLayout::forms(n), 0.6, 1);
  return buildPiB(formsTriple(g, b.b1, b.b2));
}

void BM_BuildPiB(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(randomSystem(2, m));
  state.SetComplexityN(m * m);
}
BENCHMARK(BM_BuildPiB)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_SparseResolventApply(benchmark::State& state) {
  const PiBSystem sys = randomSystem(2, static_cast<int>(state.range(0)));
  const Vector u = Vector::Ones(sys.piB.rows());
  for (auto _ : state) benchmark::DoNotOptimize(resolventApply(sys.piB, Complex(0.0, 0.01), u));
}
BENCHMARK(BM_SparseResolventApply)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ContourPsi(benchmark::State& state) {
  const Matrix pi = randomSystem(1, static_cast<int>(state.range(0))).piB.dense();
  const HoloFunction psi = HoloFunction::rational({0.0, 1.0}, {1.0, 0.0, 1.0});
  const ContourSpec spec = ContourSpec::automatic(pi);
  for (auto _ : state) benchmark::DoNotOptimize(contourPsi(pi, psi, spec));
}
BENCHMARK(BM_ContourPsi)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EigenOracleSgn(benchmark::State& state) {
  const Matrix pi = randomSystem(1, static_cast<int>(state.range(0))).piB.dense();
  for (auto _ : state) benchmark::DoNotOptimize(eigenOracle(pi, HoloFunction::sgn()));
}
BENCHMARK(BM_EigenOracleSgn)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DirectProjections(benchmark::State& state) {
  const PiBSystem sys = randomSystem(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(directProjections(sys));
}
BENCHMARK(BM_DirectProjections)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_QuadRatio(benchmark::State& state) {
  const Matrix pi = randomSystem(1, static_cast<int>(state.range(0))).piB.dense();
  const TGrid tg{1e-4, 1e4, 161};
  for (auto _ : state) benchmark::DoNotOptimize(quadRatio(pi, tg));
}
BENCHMARK(BM_QuadRatio)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_CarlesonNorm(benchmark::State& state) {
  const PiBSystem sys = randomSystem(1, static_cast<int>(state.range(0)));
  const TGrid density{1e-4, 1.0, 41};
  for (auto _ : state) benchmark::DoNotOptimize(carlesonNorm(sys, density));
}
BENCHMARK(BM_CarlesonNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CauchySine(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const GridSpec g{1, m, 1.0};
  RealVector y(m);
  for (int j = 0; j < m; ++j) y(j) = 0.3 * std::sin(2.0 * kPi * j / m);
  const LipschitzCurve c = LipschitzCurve::fromSamples(g, y);
  for (auto _ : state) benchmark::DoNotOptimize(cauchyOperator(c));
}
BENCHMARK(BM_CauchySine)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
