#include <doctest.h>

#include <cmath>

#include "bench_setup.hpp"
#include "test_helpers.hpp"
#include "zslnorm/errors.hpp"
#include "zslnorm/init.hpp"
#include "zslnorm/zsl.hpp"

using namespace zslnorm;

namespace {

// 3 orthogonal classes with a wide margin; a linear map taking attribute c
// to center c classifies perfectly, so a trained model should too.
ZslDataset separable_three_class() {
  ZslDataset data;
  data.attributes = Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}};
  data.seen_class_ids = {0, 1, 2};
  data.unseen_class_ids = {3};
  const std::size_t per_class = 12;
  Rng rng(77);
  auto fill = [&](const std::vector<int>& classes) {
    LabeledFeatures out;
    out.features = Matrix(per_class * classes.size(), 3);
    std::size_t row = 0;
    for (int c : classes) {
      for (std::size_t i = 0; i < per_class; ++i, ++row) {
        for (std::size_t j = 0; j < 3; ++j) {
          out.features(row, j) =
              (static_cast<int>(j) == c ? 4.0 : (c == 3 && j < 2 ? 2.0 : 0.0)) +
              0.05 * rng.next_normal();
        }
        out.labels.push_back(c);
      }
    }
    return out;
  };
  data.seen_train = fill({0, 1, 2});
  data.seen_test = fill({0, 1, 2});
  data.unseen_test = fill({3});
  return data;
}

double train_accuracy(const TrainedModel& model, const ZslDataset& data) {
  LogitConfig cfg = model.config.logit_config();
  // Restrict the competition to seen classes for plain training accuracy.
  Matrix prototypes = class_prototypes(model, data.attributes);
  Matrix logits = compute_logits(data.seen_train.features, prototypes, cfg);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    int best = data.seen_class_ids.front();
    for (int c : data.seen_class_ids) {
      if (logits(i, static_cast<std::size_t>(c)) > logits(i, static_cast<std::size_t>(best))) {
        best = c;
      }
    }
    if (best == data.seen_train.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(logits.rows());
}

}  // namespace

TEST_SUITE("zsl") {

TEST_CASE("harmonic mean formula") {
  CHECK(harmonic_mean(0.4, 0.6) == doctest::Approx(0.48).epsilon(1e-15));
  CHECK(harmonic_mean(0.0, 0.0) == 0.0);
  CHECK(harmonic_mean(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("per_class_accuracy is a per-class mean, immune to imbalance") {
  // Class 0: 3 samples 2 correct; class 1: 1 sample correct.
  std::vector<int> truth{0, 0, 0, 1};
  std::vector<int> preds{0, 0, 1, 1};
  const double acc = per_class_accuracy(preds, truth, {0, 1});
  CHECK(acc == doctest::Approx(0.5 * (2.0 / 3.0 + 1.0)).epsilon(1e-15));

  // Duplicating every class-0 sample leaves the metric untouched.
  std::vector<int> truth2{0, 0, 0, 0, 0, 0, 1};
  std::vector<int> preds2{0, 0, 1, 0, 0, 1, 1};
  CHECK(per_class_accuracy(preds2, truth2, {0, 1}) == doctest::Approx(acc).epsilon(1e-15));
}

TEST_CASE("epochs=0 returns the freshly initialized model") {
  ZslDataset data = separable_three_class();
  TrainConfig config;
  config.epochs = 0;
  config.hidden_dim = 4;
  config.n_hidden_layers = 1;
  config.batch_size = 8;
  config.seed = 5;
  TrainResult result = train(config, data);
  CHECK(result.log.steps == 0);

  // The untouched model equals a direct initialization from the same seed.
  Rng rng(config.seed);
  Rng init_rng = rng.substream(0);
  EmbedderConfig ec;
  ec.attr_dim = 3;
  ec.hidden_dim = 4;
  ec.feature_dim = 3;
  ec.n_hidden_layers = 1;
  ec.class_norm = config.class_norm;
  ec.body_init = config.body_init;
  ec.output_init = config.resolved_output_init();
  Embedder fresh(ec, init_rng);
  CHECK(result.model.embedder == fresh);
}

TEST_CASE("separable three-class problem trains to high accuracy") {
  ZslDataset data = separable_three_class();

  // Hand-checked linear solution: V = identity maps attribute c onto the
  // class center direction, classifying every training point correctly.
  {
    TrainedModel oracle;
    oracle.config = TrainConfig{};
    oracle.config.n_hidden_layers = 0;
    oracle.config.class_norm = false;
    oracle.preproc = AttributePreprocState::fit(AttributePreproc::an, data.attributes);
    EmbedderConfig ec;
    ec.attr_dim = 3;
    ec.feature_dim = 3;
    ec.n_hidden_layers = 0;
    ec.class_norm = false;
    Rng rng(1);
    oracle.embedder = Embedder(ec, rng);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) oracle.embedder.output_matrix()(i, j) = i == j;
    }
    CHECK(train_accuracy(oracle, data) == 1.0);
  }

  TrainConfig config;
  config.epochs = 50;
  config.batch_size = 16;
  config.lr = 0.01;
  config.hidden_dim = 8;
  config.n_hidden_layers = 1;
  config.seed = 9;
  TrainResult result = train(config, data);
  CHECK(train_accuracy(result.model, data) >= 0.99);
  for (const EpochLog& e : result.log.epochs) CHECK(std::isfinite(e.mean_loss));
}

TEST_CASE("training is bit-deterministic given the seed") {
  ZslDataset data = separable_three_class();
  TrainConfig config;
  config.epochs = 5;
  config.batch_size = 8;
  config.hidden_dim = 6;
  config.n_hidden_layers = 2;
  config.seed = 1234;
  TrainResult a = train(config, data);
  TrainResult b = train(config, data);
  CHECK(a.model.embedder == b.model.embedder);
  REQUIRE(a.log.epochs.size() == b.log.epochs.size());
  for (std::size_t i = 0; i < a.log.epochs.size(); ++i) {
    CHECK(a.log.epochs[i].mean_loss == b.log.epochs[i].mean_loss);
  }
}

TEST_CASE("training loss stays finite across the gamma range") {
  ZslDataset data = separable_three_class();
  for (double gamma : {1.0, 20.0}) {
    TrainConfig config;
    config.epochs = 3;
    config.batch_size = 8;
    config.hidden_dim = 6;
    config.n_hidden_layers = 2;
    config.gamma = gamma;
    config.seed = 5;
    TrainResult result = train(config, data);
    for (const EpochLog& e : result.log.epochs) CHECK(std::isfinite(e.mean_loss));
  }
}

TEST_CASE("gzsl_eval oracle cases") {
  ZslDataset data = separable_three_class();
  TrainConfig config;
  config.epochs = 60;
  config.batch_size = 16;
  config.lr = 0.01;
  config.hidden_dim = 8;
  config.n_hidden_layers = 1;
  config.seed = 3;
  TrainResult result = train(config, data);
  EvalReport report = gzsl_eval(result.model, data, config.logit_config());
  CHECK(report.gzsl_h == doctest::Approx(harmonic_mean(report.gzsl_u, report.gzsl_s)));
  CHECK(report.gzsl_s >= 0.0);
  CHECK(report.gzsl_s <= 1.0);
  CHECK(report.gzsl_u >= 0.0);
  CHECK(report.gzsl_u <= 1.0);
  // Per-class map covers every class with test data.
  CHECK(report.per_class_accuracy.size() == 4);
}

TEST_CASE("hand-enumerated two-seen/two-unseen toy matches brute force") {
  // Identity embedder on 4 orthogonal attribute classes; features chosen so
  // every logit is hand-computable as a cosine.
  ZslDataset data;
  data.attributes = Matrix{{1.0, 0.0, 0.0, 0.0},
                           {0.0, 1.0, 0.0, 0.0},
                           {0.0, 0.0, 1.0, 0.0},
                           {0.0, 0.0, 0.0, 1.0}};
  data.seen_class_ids = {0, 1};
  data.unseen_class_ids = {2, 3};
  data.seen_train.features = Matrix{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  data.seen_train.labels = {0, 1};
  // Seen test: one point correct for 0, one point that argmaxes to class 2.
  data.seen_test.features = Matrix{{0.9, 0.1, 0.0, 0.0}, {0.1, 0.2, 0.9, 0.0}};
  data.seen_test.labels = {0, 1};
  // Unseen test: class 2 correct, class 3 predicted as class 0.
  data.unseen_test.features = Matrix{{0.0, 0.0, 1.0, 0.0}, {0.9, 0.0, 0.0, 0.3}};
  data.unseen_test.labels = {2, 3};

  TrainedModel model;
  model.config = TrainConfig{};
  model.config.n_hidden_layers = 0;
  model.config.class_norm = false;
  model.config.attribute_preproc = AttributePreproc::none;
  model.preproc.kind = AttributePreproc::none;
  EmbedderConfig ec;
  ec.attr_dim = 4;
  ec.feature_dim = 4;
  ec.n_hidden_layers = 0;
  ec.class_norm = false;
  Rng rng(1);
  model.embedder = Embedder(ec, rng);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) model.embedder.output_matrix()(i, j) = i == j;
  }

  LogitConfig cfg{LogitMode::normalize_scale, 5.0, 1.0};
  EvalReport report = gzsl_eval(model, data, cfg);
  // Brute force: seen sample 1 -> class 0 (cos 0.9937 highest); sample 2 ->
  // class 2. Unseen sample 1 -> class 2; sample 2 -> class 0.
  CHECK(report.gzsl_s == doctest::Approx(0.5).epsilon(1e-12));   // class0 1.0, class1 0.0
  CHECK(report.gzsl_u == doctest::Approx(0.5).epsilon(1e-12));   // class2 1.0, class3 0.0
  CHECK(report.gzsl_h == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.per_class_accuracy.at(0) == doctest::Approx(1.0));
  CHECK(report.per_class_accuracy.at(1) == doctest::Approx(0.0));

  // Oracle predictor sanity: feeding features equal to each class prototype
  // direction yields U = S = H = 1.
  ZslDataset perfect = data;
  perfect.seen_test.features = Matrix{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  perfect.seen_test.labels = {0, 1};
  perfect.unseen_test.features = Matrix{{0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};
  perfect.unseen_test.labels = {2, 3};
  EvalReport ideal = gzsl_eval(model, perfect, cfg);
  CHECK(ideal.gzsl_u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ideal.gzsl_s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ideal.gzsl_h == doctest::Approx(1.0).epsilon(1e-12));

  // Lowering the seen scale never helps seen accuracy and never hurts
  // unseen accuracy here (all logits are nonnegative cosines).
  const std::vector<double> grid{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.3, 0.1};
  auto points = sweep_seen_scale(model, data, cfg.gamma, grid);
  for (std::size_t i = 1; i < points.size(); ++i) {
    CHECK(points[i].gzsl_s <= points[i - 1].gzsl_s + 1e-12);
    CHECK(points[i].gzsl_u >= points[i - 1].gzsl_u - 1e-12);
  }
}

TEST_CASE("area_under_su_curve oracles") {
  SUBCASE("hand-built three-point curve") {
    CHECK(area_under_su_curve({{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}}) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("perfect model square") {
    CHECK(area_under_su_curve({{1.0, 1.0}, {1.0, 1.0}}) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero axes") {
    CHECK(area_under_su_curve({{0.3, 0.0}, {0.8, 0.0}}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(area_under_su_curve({{0.0, 0.4}, {0.0, 0.9}}) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("left anchor extends horizontally") {
    CHECK(area_under_su_curve({{0.5, 0.8}, {1.0, 0.2}}) ==
          doctest::Approx(0.5 * 0.8 + 0.5 * 0.5).epsilon(1e-12));
  }
}

TEST_CASE("ausuc validates its grid") {
  ZslDataset data = separable_three_class();
  TrainConfig config;
  config.epochs = 1;
  config.hidden_dim = 4;
  config.n_hidden_layers = 0;
  config.seed = 2;
  TrainResult result = train(config, data);
  const std::vector<double> short_grid{1.0, 0.9};
  CHECK_THROWS_AS(ausuc(result.model, data, 5.0, short_grid), ConfigError);
  const std::vector<double> bad_grid{1.0, 0.9, 0.8, 0.7, 1.2};
  CHECK_THROWS_AS(ausuc(result.model, data, 5.0, bad_grid), ConfigError);
  const std::vector<double> grid{1.0, 0.95, 0.9, 0.85, 0.8};
  const double area = ausuc(result.model, data, 5.0, grid);
  CHECK(area >= 0.0);
  CHECK(area <= 1.0);
}

TEST_CASE("removing NS or AN degrades GZSL-H on most seeds") {
  using namespace zslnorm::testing;
  std::size_t full_wins = 0;
  const std::size_t seeds = 20;
  SyntheticConfig data_config = benchmark_data_config();
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    Rng rng(500 + seed);
    ZslDataset data = generate_synthetic_zsl(data_config, rng);
    TrainConfig full = benchmark_train_config(seed);
    full.class_norm = false;  // isolate the NS/AN ablation
    TrainConfig stripped = benchmark_no_ns_no_an(seed);
    EvalReport a = gzsl_eval(train(full, data).model, data, full.logit_config());
    EvalReport b = gzsl_eval(train(stripped, data).model, data, stripped.logit_config());
    if (a.gzsl_h > b.gzsl_h) ++full_wins;
  }
  CHECK(full_wins >= 16);  // >= 80% of 20 seeds
}

TEST_CASE("label-shuffled training lands at chance level") {
  using namespace zslnorm::testing;
  // Chance per-class accuracy in the 25-class joint space is 1/25 = 0.04;
  // with 40 test rows per class the +4-sigma envelope of the harmonic mean
  // stays well below 0.12. Real training must clear that band.
  const double chance_band = 0.12;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(9000 + seed);
    ZslDataset data = generate_synthetic_zsl(benchmark_data_config(), rng);
    TrainConfig cfg = benchmark_train_config(seed);
    Rng shuffle_rng(9100 + seed);
    ZslDataset shuffled = shuffle_train_labels(data, shuffle_rng);
    EvalReport trained = gzsl_eval(train(cfg, data).model, data, cfg.logit_config());
    EvalReport permuted = gzsl_eval(train(cfg, shuffled).model, data, cfg.logit_config());
    CAPTURE(seed);
    CHECK(permuted.gzsl_h <= chance_band);
    CHECK(trained.gzsl_h > chance_band);
    CHECK(trained.gzsl_h > permuted.gzsl_h);
  }
}

TEST_CASE("cross_validate picks the dominant configuration") {
  SyntheticConfig data_config;
  data_config.seen_classes = 16;
  data_config.unseen_classes = 3;
  data_config.attr_dim = 16;
  data_config.feature_dim = 32;
  data_config.n_per_class = 30;
  data_config.noise = 0.25;
  Rng rng(41);
  ZslDataset data = generate_synthetic_zsl(data_config, rng);

  TrainConfig good;
  good.epochs = 30;
  good.batch_size = 64;
  good.lr = 0.005;
  good.hidden_dim = 32;
  good.n_hidden_layers = 1;
  good.seed = 7;
  TrainConfig useless = good;
  useless.epochs = 0;  // untrained model cannot dominate

  SUBCASE("single-config grid returns that config") {
    const TrainConfig grid[] = {good};
    CvResult result = cross_validate(grid, data, 0.2, 0.15, 99);
    CHECK(result.best_index == 0);
    CHECK(result.table.size() == 1);
  }
  SUBCASE("trained beats untrained") {
    const TrainConfig grid[] = {useless, good};
    CvResult result = cross_validate(grid, data, 0.2, 0.15, 99);
    CHECK(result.best_index == 1);
    CHECK(result.table[1].report.gzsl_h > result.table[0].report.gzsl_h);
  }
  SUBCASE("split is deterministic in the seed") {
    const TrainConfig grid[] = {good};
    CvResult a = cross_validate(grid, data, 0.15, 0.1, 123);
    CvResult b = cross_validate(grid, data, 0.15, 0.1, 123);
    CHECK(a.table[0].report.gzsl_h == b.table[0].report.gzsl_h);
  }
  SUBCASE("fraction validation") {
    const TrainConfig grid[] = {good};
    CHECK_THROWS_AS(cross_validate(grid, data, 0.0, 0.1, 1), ConfigError);
    CHECK_THROWS_AS(cross_validate(grid, data, 0.1, 1.0, 1), ConfigError);
  }
}

}  // TEST_SUITE
