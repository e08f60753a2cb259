#include <benchmark/benchmark.h>

#include "zslnorm/init.hpp"
#include "zslnorm/logits.hpp"
#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"
#include "zslnorm/stats.hpp"

namespace {

using namespace zslnorm;

void BM_NormalSampling(benchmark::State& state) {
  Rng rng(1);
  double sink = 0.0;
  for (auto _ : state) {
    for (int i = 0; i < 1024; ++i) sink += rng.next_normal();
    benchmark::DoNotOptimize(sink);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_NormalSampling);

void BM_Matmul(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  Matrix a = standard_normal_matrix(n, n, rng);
  Matrix b = standard_normal_matrix(n, n, rng);
  for (auto _ : state) {
    Matrix c = matmul(a, b);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_CosineLogits(benchmark::State& state) {
  Rng rng(3);
  Matrix z = standard_normal_matrix(128, 128, rng);
  Matrix w = standard_normal_matrix(20, 128, rng);
  const LogitConfig cfg{LogitMode::normalize_scale, 5.0, 1.0};
  for (auto _ : state) {
    Matrix y = compute_logits(z, w, cfg);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_CosineLogits);

void BM_NormalityStatistic(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (double& x : v) x = rng.next_normal();
  for (auto _ : state) {
    auto r = normality_statistic(v);
    benchmark::DoNotOptimize(r.k2);
  }
}
BENCHMARK(BM_NormalityStatistic)->Arg(1000)->Arg(10000);

}  // namespace
