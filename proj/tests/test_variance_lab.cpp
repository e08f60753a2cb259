#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "bench_setup.hpp"
#include "zslnorm/errors.hpp"
#include "zslnorm/loss.hpp"
#include "zslnorm/optim.hpp"
#include "zslnorm/variance_lab.hpp"

using namespace zslnorm;

TEST_SUITE("variance-lab") {

TEST_CASE("cosine experiment tracks the closed form at moderate dimension") {
  // At d = 2048 the approximation and the exact variance 1/d differ by
  // ~0.2%, far below Monte-Carlo noise at 2e4 trials.
  const std::size_t dims[] = {2048};
  Rng rng(70);
  auto reports = synthetic_cosine_experiment(dims, 1.0, 20000, rng);
  REQUIRE(reports.size() == 1);
  const VarianceReport& r = reports[0];
  CHECK(r.predicted == doctest::Approx(2048.0 / (2046.0 * 2046.0)).epsilon(1e-12));
  CHECK(std::fabs(r.empirical - r.predicted) <= 0.1 * r.predicted);
  CHECK(r.stderr_of_empirical > 0.0);
}

TEST_CASE("cosine experiment at small dimension matches the exact variance 1/d") {
  // The exact variance of the cosine between two isotropic normals is 1/d;
  // at d = 32 the closed-form approximation overshoots it by ~13%.
  const std::size_t dims[] = {32};
  Rng rng(71);
  auto reports = synthetic_cosine_experiment(dims, 1.0, 100000, rng);
  const VarianceReport& r = reports[0];
  CHECK(std::fabs(r.empirical - 1.0 / 32.0) <= 4.0 * r.stderr_of_empirical);
  CHECK(r.predicted == doctest::Approx(32.0 / 900.0).epsilon(1e-12));
}

TEST_CASE("gamma scales the cosine variance by gamma^4 exactly on shared draws") {
  const std::size_t dims[] = {64};
  Rng rng(72);
  auto g1 = synthetic_cosine_experiment(dims, 1.0, 20000, rng);
  auto g2 = synthetic_cosine_experiment(dims, 2.0, 20000, rng);
  CHECK(g2[0].empirical == doctest::Approx(16.0 * g1[0].empirical).epsilon(1e-9));
}

TEST_CASE("cosine experiment is symmetric and seed-reproducible") {
  const std::size_t dims[] = {128};
  Rng rng(73);
  auto a = synthetic_cosine_experiment(dims, 1.0, 10000, rng);
  auto b = synthetic_cosine_experiment(dims, 1.0, 10000, rng);
  CHECK(a[0].empirical == b[0].empirical);
  CHECK_THROWS_AS(synthetic_cosine_experiment(dims, 1.0, 1, rng), InsufficientDataError);
}

TEST_CASE("statement 2: unit-norm attributes with fan-out init preserve variance") {
  PrelogitExperiment exp;
  exp.n_hidden_layers = 0;
  exp.class_norm = false;
  exp.output_init = {InitKind::xavier_fan_out, InitDistribution::normal};
  exp.attribute_source = AttributeSource::unit_norm;
  Rng rng(74);
  VarianceReport r = prelogit_variance_experiment(exp, 4000, rng);
  CHECK(r.predicted == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.empirical > 0.9);
  CHECK(r.empirical < 1.1);
  // Report-level tolerance: within max(10% of prediction, 4 stderr).
  CHECK(std::fabs(r.empirical - r.predicted) <=
        std::max(0.1 * r.predicted, 4.0 * r.stderr_of_empirical));
}

TEST_CASE("statement 2: raw attributes scale the variance by the mean squared norm") {
  PrelogitExperiment exp;
  exp.n_hidden_layers = 0;
  exp.class_norm = false;
  exp.output_init = {InitKind::xavier_fan_out, InitDistribution::normal};
  exp.attribute_source = AttributeSource::raw;
  Rng rng(75);
  VarianceReport r = prelogit_variance_experiment(exp, 4000, rng);
  // Raw gaussian attributes have E||a||^2 ~ attr_dim.
  CHECK(r.predicted > 2.0);
  CHECK(std::fabs(r.empirical - r.predicted) <= 0.1 * r.predicted);
}

TEST_CASE("statement 3: class normalization restores unit variance in deep embedders") {
  PrelogitExperiment exp;
  exp.n_hidden_layers = 2;
  exp.class_norm = true;
  exp.output_init = {InitKind::cn_output, InitDistribution::normal};
  exp.attribute_source = AttributeSource::unit_norm;
  Rng rng(76);
  VarianceReport r = prelogit_variance_experiment(exp, 4000, rng);
  CHECK(r.predicted == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.empirical > 0.9);
  CHECK(r.empirical < 1.1);
}

TEST_CASE("statement 3: xavier without standardization drifts below unit") {
  PrelogitExperiment exp;
  exp.n_hidden_layers = 2;
  exp.class_norm = false;
  exp.output_init = {InitKind::xavier_fan_out, InitDistribution::normal};
  exp.attribute_source = AttributeSource::unit_norm;
  Rng rng(77);
  VarianceReport r = prelogit_variance_experiment(exp, 4000, rng);
  CHECK(r.predicted == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.empirical < 0.9);
}

TEST_CASE("logit variance probe") {
  using namespace zslnorm::testing;
  SUBCASE("records zeros for constant logits") {
    LogitVarianceProbe probe(1);
    probe.on_step(0, Matrix(4, 3, 2.5), 0.0);
    CHECK(probe.trace().values.size() == 1);
    CHECK(probe.trace().values[0] == 0.0);
  }
  SUBCASE("detached probe throws") {
    LogitVarianceProbe probe(1);
    CHECK_THROWS_AS(probe.trace(), StateError);
  }
  SUBCASE("initial trace value sits in the predicted band and observing is pure") {
    SyntheticConfig data_config = benchmark_data_config();
    Rng rng(80);
    ZslDataset data = generate_synthetic_zsl(data_config, rng);
    TrainConfig config = benchmark_train_config(3);
    config.epochs = 2;

    LogitVarianceProbe probe(1);
    TrainResult probed = train(config, data, &probe);
    TrainResult bare = train(config, data);
    CHECK(probed.model.embedder == bare.model.embedder);

    REQUIRE(!probe.trace().values.empty());
    const double first = probe.trace().values.front();
    CHECK(first >= 0.1);
    CHECK(first <= 10.0);
    // Monotone iteration indices.
    for (std::size_t i = 1; i < probe.trace().iterations.size(); ++i) {
      CHECK(probe.trace().iterations[i] > probe.trace().iterations[i - 1]);
    }
  }
}

TEST_CASE("smoothness probe") {
  using namespace zslnorm::testing;
  SyntheticConfig data_config = benchmark_data_config();
  data_config.seen_classes = 10;
  data_config.unseen_classes = 3;
  Rng rng(81);
  ZslDataset data = generate_synthetic_zsl(data_config, rng);

  TrainConfig config = benchmark_train_config(4);
  config.epochs = 2;
  TrainResult result = train(config, data);

  SUBCASE("zero-gradient model probes to zero") {
    // A single-class problem makes the softmax identically 1, so the loss
    // gradient vanishes everywhere. Class normalization needs two classes,
    // so the degenerate probe runs on a plain embedder.
    ZslDataset single = data;
    single.seen_class_ids = {data.seen_class_ids[0]};
    single.seen_train = filter_classes(data.seen_train, single.seen_class_ids);
    single.seen_test = filter_classes(data.seen_test, single.seen_class_ids);
    TrainConfig plain_config = config;
    plain_config.class_norm = false;
    plain_config.epochs = 0;
    TrainedModel model = train(plain_config, data).model;
    ZslSmoothnessTarget target(model, single);
    Rng probe_rng(82);
    CHECK(smoothness_probe(target, 3, 16, probe_rng) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("probing does not mutate the model") {
    TrainedModel model = result.model;
    Embedder snapshot = model.embedder;
    ZslSmoothnessTarget target(model, data);
    Rng probe_rng(83);
    smoothness_probe(target, 2, 32, probe_rng);
    CHECK(model.embedder == snapshot);
  }

  SUBCASE("zsl gradient norms exceed a briefly trained matched classifier's") {
    // Mirror of the paired protocol on the standard benchmark at one seed.
    SyntheticConfig bench = benchmark_data_config();
    Rng bench_rng(1000);
    ZslDataset bench_data = generate_synthetic_zsl(bench, bench_rng);
    TrainConfig zsl_cfg = benchmark_no_cn(0);
    const std::size_t steps = 150;

    TrainedModel zsl_model;
    {
      Rng r(zsl_cfg.seed);
      Rng init_rng = r.substream(0);
      Rng shuffle_rng = r.substream(1);
      zsl_model.config = zsl_cfg;
      Matrix seen_attrs(bench_data.seen_class_ids.size(), bench_data.attributes.cols());
      for (std::size_t i = 0; i < bench_data.seen_class_ids.size(); ++i) {
        const auto row =
            bench_data.attributes.row(static_cast<std::size_t>(bench_data.seen_class_ids[i]));
        std::copy(row.begin(), row.end(), seen_attrs.row(i).begin());
      }
      zsl_model.preproc = AttributePreprocState::fit(zsl_cfg.attribute_preproc, seen_attrs);
      EmbedderConfig ec;
      ec.attr_dim = bench_data.attributes.cols();
      ec.hidden_dim = zsl_cfg.hidden_dim;
      ec.feature_dim = bench_data.seen_train.features.cols();
      ec.n_hidden_layers = zsl_cfg.n_hidden_layers;
      ec.class_norm = zsl_cfg.class_norm;
      ec.body_init = zsl_cfg.body_init;
      ec.output_init = zsl_cfg.resolved_output_init();
      zsl_model.embedder = Embedder(ec, init_rng);
      Matrix class_attrs = zsl_model.preproc.apply(seen_attrs);
      run_training_steps(zsl_model.embedder, zsl_cfg, class_attrs, bench_data.seen_class_ids,
                         bench_data.seen_train, steps, shuffle_rng, nullptr, nullptr);
    }
    ZslSmoothnessTarget zsl_target(zsl_model, bench_data);

    // Same layer count and hidden width, trained on the same features with
    // identical optimizer settings and step budget.
    Rng clf_master(zsl_cfg.seed);
    Rng clf_init = clf_master.substream(0);
    MlpClassifier classifier(bench_data.seen_train.features.cols(), zsl_cfg.hidden_dim,
                             zsl_cfg.n_hidden_layers, bench_data.seen_class_ids.size(),
                             zsl_cfg.body_init, clf_init);
    std::map<int, int> local;
    for (std::size_t i = 0; i < bench_data.seen_class_ids.size(); ++i) {
      local[bench_data.seen_class_ids[i]] = static_cast<int>(i);
    }
    LabeledFeatures local_data = bench_data.seen_train;
    for (int& label : local_data.labels) label = local.at(label);
    {
      Rng shuffle_rng = clf_master.substream(1);
      auto params = classifier.parameters();
      AdamConfig ac;
      ac.lr = zsl_cfg.lr;
      AdamState adam(params, ac);
      std::vector<std::size_t> order(local_data.size());
      std::iota(order.begin(), order.end(), 0);
      const std::size_t batch = std::min(zsl_cfg.batch_size, local_data.size());
      std::size_t step = 0;
      while (step < steps) {
        for (std::size_t i = order.size(); i-- > 1;) {
          const std::size_t j = shuffle_rng.next_below(i + 1);
          std::swap(order[i], order[j]);
        }
        for (std::size_t start = 0; start < local_data.size() && step < steps;
             start += batch, ++step) {
          const std::size_t end = std::min(start + batch, local_data.size());
          Matrix x(end - start, local_data.features.cols());
          std::vector<int> y(end - start);
          for (std::size_t i = start; i < end; ++i) {
            const auto row = local_data.features.row(order[i]);
            std::copy(row.begin(), row.end(), x.row(i - start).begin());
            y[i - start] = local_data.labels[order[i]];
          }
          MlpStack::Cache cache;
          Matrix logits = classifier.forward(x, &cache);
          LossResult loss = cross_entropy_loss(logits, y, 0.0);
          MlpStack::Gradients grads = classifier.backward(cache, loss.grad_logits);
          std::vector<ParamView> grad_views;
          for (std::size_t li = 0; li < grads.weights.size(); ++li) {
            grad_views.push_back({grads.weights[li].data(), grads.weights[li].size()});
            grad_views.push_back({grads.biases[li].data(), grads.biases[li].size()});
          }
          adam.step(params, grad_views);
        }
      }
    }
    ClassifierSmoothnessTarget clf_target(classifier, local_data);

    Rng r1(splitmix64(1000)), r2(splitmix64(1000));
    const double zsl_value = smoothness_probe(zsl_target, 10, 256, r1);
    const double clf_value = smoothness_probe(clf_target, 10, 256, r2);
    CHECK(zsl_value > clf_value);
  }
}

TEST_CASE("attribute diagnostics") {
  SUBCASE("gaussian attributes look normal and decorrelated") {
    Rng rng(86);
    Matrix attrs = standard_normal_matrix(5000, 8, rng);
    AttributeDiagnostics diag = attribute_diagnostics(attrs);
    CHECK(diag.median_normality_p > 0.01);
    CHECK(diag.median_abs_corr < 0.05);
    CHECK(diag.sq_norm_summary.mean == doctest::Approx(8.0).epsilon(0.1));
  }
  SUBCASE("lognormal attributes fail normality") {
    Rng rng(87);
    Matrix attrs = standard_normal_matrix(2000, 6, rng);
    for (double& v : attrs.flat()) v = std::exp(v);
    AttributeDiagnostics diag = attribute_diagnostics(attrs);
    CHECK(diag.median_normality_p < 0.01);
  }
  SUBCASE("duplicated column shows |corr| 1") {
    Rng rng(88);
    Matrix attrs = standard_normal_matrix(200, 3, rng);
    for (std::size_t i = 0; i < attrs.rows(); ++i) attrs(i, 2) = attrs(i, 1);
    AttributeDiagnostics diag = attribute_diagnostics(attrs);
    CHECK(diag.correlation.mean_abs_corr[1] > 0.5);
    CHECK(diag.correlation.mean_abs_corr[2] > 0.5);
  }
  SUBCASE("unit-normalized attributes have unit squared norms") {
    Rng rng(89);
    Matrix attrs = attribute_normalize(standard_normal_matrix(64, 7, rng));
    AttributeDiagnostics diag = attribute_diagnostics(attrs);
    CHECK(diag.sq_norm_summary.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(diag.sq_norm_summary.variance == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("needs 20 classes") {
    Rng rng(90);
    Matrix attrs = standard_normal_matrix(19, 4, rng);
    CHECK_THROWS_AS(attribute_diagnostics(attrs), InsufficientDataError);
  }
}

}  // TEST_SUITE
