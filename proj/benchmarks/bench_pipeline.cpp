#include <benchmark/benchmark.h>

#include "zslnorm/dataset.hpp"
#include "zslnorm/embedder.hpp"
#include "zslnorm/loss.hpp"
#include "zslnorm/zsl.hpp"

namespace {

using namespace zslnorm;

ZslDataset bench_data() {
  SyntheticConfig config;
  config.seen_classes = 20;
  config.unseen_classes = 5;
  config.attr_dim = 32;
  config.feature_dim = 128;
  config.n_per_class = 40;
  config.noise = 0.8;
  Rng rng(1);
  return generate_synthetic_zsl(config, rng);
}

void BM_EmbedderForwardBackward(benchmark::State& state) {
  EmbedderConfig config;
  config.attr_dim = 32;
  config.hidden_dim = 64;
  config.feature_dim = 128;
  config.n_hidden_layers = 2;
  config.class_norm = true;
  Rng rng(2);
  Embedder embedder(config, rng);
  Matrix attrs = attribute_normalize(standard_normal_matrix(20, 32, rng));
  Matrix upstream = standard_normal_matrix(20, 128, rng);
  for (auto _ : state) {
    Embedder::Cache cache;
    Matrix w = embedder.forward(attrs, Mode::train, &cache);
    GradientTape tape = embedder.backward(cache, upstream);
    benchmark::DoNotOptimize(tape.output_matrix.data());
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_EmbedderForwardBackward);

void BM_TrainEpoch(benchmark::State& state) {
  ZslDataset data = bench_data();
  for (auto _ : state) {
    TrainConfig config;
    config.epochs = 1;
    config.batch_size = 128;
    config.hidden_dim = 64;
    config.n_hidden_layers = 2;
    config.lr = 0.002;
    config.seed = 3;
    TrainResult result = train(config, data);
    benchmark::DoNotOptimize(result.log.steps);
  }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_GzslEval(benchmark::State& state) {
  ZslDataset data = bench_data();
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 128;
  config.hidden_dim = 64;
  config.n_hidden_layers = 2;
  config.lr = 0.002;
  config.seed = 4;
  TrainResult result = train(config, data);
  for (auto _ : state) {
    EvalReport report = gzsl_eval(result.model, data, config.logit_config());
    benchmark::DoNotOptimize(report.gzsl_h);
  }
  state.SetLabel("25-class joint space");
}
BENCHMARK(BM_GzslEval)->Unit(benchmark::kMillisecond);

}  // namespace
