#include <benchmark/benchmark.h>

#include "ccert/bounds.hpp"
#include "ccert/hull.hpp"
#include "ccert/rng.hpp"
#include "ccert/special.hpp"
#include "ccert/svm.hpp"

using namespace ccert;

namespace {

void BM_RegIncBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  const double b = static_cast<double>(state.range(0)) * 3.0 + 1.0;
  double t = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reg_inc_beta(t, a, b));
    t = t < 0.8 ? t + 1e-4 : 0.2;
  }
}
BENCHMARK(BM_RegIncBeta)->Arg(10)->Arg(200)->Arg(2000)->Arg(8000);

void BM_EpsUpper(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  std::int64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eps_upper({n, k, 1e-6}).value);
    k = (k + 7) % n;
  }
}
BENCHMARK(BM_EpsUpper)->Arg(100)->Arg(2000);

void BM_EpsInterval(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  std::int64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eps_interval({n, k, 1e-6}).upper.value);
    k = (k + 7) % n;
  }
}
BENCHMARK(BM_EpsInterval)->Arg(100)->Arg(2000)->Arg(8000);

void BM_BoundTable(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(bound_table(n, 1e-6, {}, 1).rows.size());
}
BENCHMARK(BM_BoundTable)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Hull3D(benchmark::State& state) {
  Rng rng(1);
  std::vector<Point> pts;
  for (int i = 0; i < state.range(0); ++i)
    pts.push_back({rng.normal(), rng.normal(), rng.normal()});
  for (auto _ : state)
    benchmark::DoNotOptimize(HullModel::build(pts, 3).vertices().size());
}
BENCHMARK(BM_Hull3D)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_SmoTrain(benchmark::State& state) {
  Rng rng(2);
  Multiset<LabeledExample> u;
  for (int i = 0; i < state.range(0); ++i) {
    const double y = rng.coin() ? 1.0 : -1.0;
    u.insert({Point{y + rng.normal(), y + rng.normal()}, y});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(svm_train(u, Kernel::rbf(1.0), 10.0).b);
}
BENCHMARK(BM_SmoTrain)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
