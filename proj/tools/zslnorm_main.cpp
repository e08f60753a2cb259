// Command-line surface for the zslnorm toolkit: synthetic data generation,
// training, generalized evaluation, the variance experiments and the
// continual-learning runner. Every stochastic subcommand requires an
// explicit --seed; outputs are byte-identical across reruns.

#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zslnorm/config.hpp"
#include "zslnorm/czsl.hpp"
#include "zslnorm/errors.hpp"
#include "zslnorm/io.hpp"
#include "zslnorm/loss.hpp"
#include "zslnorm/serialize.hpp"
#include "zslnorm/variance_lab.hpp"
#include "zslnorm/zsl.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace zslnorm;

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw DataError("cannot open output path " + out_path);
  }
  out << content;
}

TrainConfig build_train_config(const std::string& config_path,
                               const std::vector<std::string>& overrides, std::uint64_t seed) {
  std::map<std::string, std::string> values;
  if (!config_path.empty()) {
    values = load_config_file(config_path);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ExperimentConfig config = make_experiment_config(values);
  config.train.seed = seed;
  return config.train;
}

ExperimentConfig build_experiment_config(const std::string& config_path,
                                         const std::vector<std::string>& overrides,
                                         std::uint64_t seed) {
  std::map<std::string, std::string> values;
  if (!config_path.empty()) {
    values = load_config_file(config_path);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ExperimentConfig config = make_experiment_config(values);
  config.train.seed = seed;
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"zslnorm: normalization toolkit for zero-shot classifiers"};
  app.require_subcommand(1);
  // One schema drives parsing, validation and the help text.
  app.footer(config_help_text());

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::uint64_t synth_seed = 0;
  std::string synth_prefix, synth_out, synth_layout = "zsl", synth_attr_model = "gaussian";
  SyntheticConfig synth_cfg;
  synth->add_option("--seed", synth_seed, "random seed")->required();
  synth->add_option("--out-prefix", synth_prefix, "path prefix for the dataset files")->required();
  synth->add_option("--seen", synth_cfg.seen_classes, "seen class count");
  synth->add_option("--unseen", synth_cfg.unseen_classes, "unseen class count");
  synth->add_option("--attr-dim", synth_cfg.attr_dim, "attribute dimensionality");
  synth->add_option("--feature-dim", synth_cfg.feature_dim, "feature dimensionality");
  synth->add_option("--per-class", synth_cfg.n_per_class, "examples per class and split");
  synth->add_option("--attr-model", synth_attr_model, "attribute model: gaussian | lognormal");
  synth->add_option("--noise", synth_cfg.noise, "feature noise std around class centers");
  synth->add_option("--layout", synth_layout,
                    "zsl (seen/unseen split) | pool (all classes, continual input)");
  synth->add_option("--out", synth_out, "summary output path (default stdout)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train an attribute embedder");
  std::uint64_t train_seed = 0;
  std::string train_data, train_config_path, train_checkpoint, train_log_path, train_out;
  std::vector<std::string> train_overrides;
  train_cmd->add_option("--seed", train_seed, "random seed")->required();
  train_cmd->add_option("--data", train_data, "dataset path prefix")->required();
  train_cmd->add_option("--checkpoint", train_checkpoint, "checkpoint output path")->required();
  train_cmd->add_option("--config", train_config_path, "key=value configuration file");
  train_cmd->add_option("--set", train_overrides, "override a configuration key (key=value)");
  train_cmd->add_option("--log", train_log_path, "JSON-lines training log path");
  train_cmd->add_option("--out", train_out, "summary output path (default stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Generalized zero-shot evaluation");
  std::string eval_data, eval_checkpoint, eval_out, eval_format = "json";
  std::optional<double> eval_gamma;
  double eval_seen_scale = 1.0;
  eval_cmd->add_option("--data", eval_data, "dataset path prefix")->required();
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "model checkpoint")->required();
  eval_cmd->add_option("--gamma", eval_gamma, "override the checkpoint gamma");
  eval_cmd->add_option("--seen-scale", eval_seen_scale, "seen-logit multiplier in (0, 1]");
  eval_cmd->add_option("--format", eval_format, "json | csv");
  eval_cmd->add_option("--out", eval_out, "output path (default stdout)");

  // gamma
  auto* gamma_cmd = app.add_subcommand("gamma", "Scale achieving a target logit variance");
  double gamma_nu = 1.0;
  std::size_t gamma_dz = 2048;
  std::string gamma_out;
  gamma_cmd->add_option("--nu", gamma_nu, "target logit variance")->required();
  gamma_cmd->add_option("--dz", gamma_dz, "feature dimensionality")->required();
  gamma_cmd->add_option("--out", gamma_out, "output path (default stdout)");

  // variance-lab
  auto* lab_cmd = app.add_subcommand("variance-lab", "Monte-Carlo variance experiments");
  std::uint64_t lab_seed = 0;
  std::string lab_experiment = "all", lab_format = "json", lab_out;
  std::size_t lab_trials = 0;
  double lab_gamma = 1.0;
  std::vector<std::size_t> lab_dims;
  lab_cmd->add_option("--seed", lab_seed, "random seed")->required();
  lab_cmd->add_option("--experiment", lab_experiment, "cosine | statement2 | statement3 | all");
  lab_cmd->add_option("--trials", lab_trials,
                      "Monte-Carlo trials (default 100000 cosine, 10000 embedder)");
  lab_cmd->add_option("--gamma", lab_gamma, "cosine scale");
  lab_cmd->add_option("--d-list", lab_dims, "cosine dimensionalities (default 32..8192)");
  lab_cmd->add_option("--format", lab_format, "json | csv");
  lab_cmd->add_option("--out", lab_out, "output path (default stdout)");

  // attr-stats
  auto* attr_cmd = app.add_subcommand("attr-stats", "Attribute distribution diagnostics");
  std::string attr_path, attr_out;
  attr_cmd->add_option("--attrs", attr_path, "attribute CSV path")->required();
  attr_cmd->add_option("--out", attr_out, "output path (default stdout)");

  // probe-smoothness
  auto* probe_cmd = app.add_subcommand("probe-smoothness", "Loss-surface gradient-norm probe");
  std::uint64_t probe_seed = 0;
  std::string probe_data, probe_config_path, probe_out;
  std::vector<std::string> probe_overrides;
  std::size_t probe_batches = 10, probe_batch_size = 256, probe_train_steps = 300;
  bool probe_perturb_attrs = false;
  probe_cmd->add_option("--seed", probe_seed, "random seed")->required();
  probe_cmd->add_option("--data", probe_data, "dataset path prefix")->required();
  probe_cmd->add_option("--config", probe_config_path, "key=value configuration file");
  probe_cmd->add_option("--set", probe_overrides, "override a configuration key (key=value)");
  probe_cmd->add_option("--batches", probe_batches, "probe batches");
  probe_cmd->add_option("--batch-size", probe_batch_size, "probe batch size");
  probe_cmd->add_option("--train-steps", probe_train_steps,
                        "training steps before probing each model");
  probe_cmd->add_flag("--perturb-attributes", probe_perturb_attrs,
                      "also add noise to the attribute matrix");
  probe_cmd->add_option("--out", probe_out, "output path (default stdout)");

  // czsl
  auto* czsl_cmd = app.add_subcommand("czsl", "Continual zero-shot sequence runner");
  std::uint64_t czsl_seed = 0;
  std::string czsl_data, czsl_config_path, czsl_method = "sequential", czsl_format = "json",
              czsl_out;
  std::vector<std::string> czsl_overrides;
  std::size_t czsl_tasks = 0, czsl_cv_tasks = 0;
  std::vector<std::size_t> czsl_sizes;
  czsl_cmd->add_option("--seed", czsl_seed, "random seed")->required();
  czsl_cmd->add_option("--data", czsl_data, "pool path prefix (synth --layout pool)")->required();
  czsl_cmd->add_option("--tasks", czsl_tasks, "task count")->required();
  czsl_cmd->add_option("--task-sizes", czsl_sizes, "explicit class counts per task");
  czsl_cmd->add_option("--method", czsl_method, "sequential | multi_task");
  czsl_cmd->add_option("--cv-tasks", czsl_cv_tasks,
                       "grid-search prefix length (0 = no cross-validation)");
  czsl_cmd->add_option("--config", czsl_config_path, "key=value configuration file");
  czsl_cmd->add_option("--set", czsl_overrides, "override a configuration key (key=value)");
  czsl_cmd->add_option("--format", czsl_format, "json | csv");
  czsl_cmd->add_option("--out", czsl_out, "output path (default stdout)");

  // sweep-seen-scale
  auto* sweep_cmd = app.add_subcommand("sweep-seen-scale", "GZSL metrics over a seen-scale grid");
  std::string sweep_data, sweep_checkpoint, sweep_format = "json", sweep_out;
  std::optional<double> sweep_gamma;
  std::vector<double> sweep_grid{1.0, 0.95, 0.9, 0.85, 0.8};
  sweep_cmd->add_option("--data", sweep_data, "dataset path prefix")->required();
  sweep_cmd->add_option("--checkpoint", sweep_checkpoint, "model checkpoint")->required();
  sweep_cmd->add_option("--gamma", sweep_gamma, "override the checkpoint gamma");
  sweep_cmd->add_option("--grid", sweep_grid, "seen-scale grid");
  sweep_cmd->add_option("--format", sweep_format, "json | csv");
  sweep_cmd->add_option("--out", sweep_out, "output path (default stdout)");

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->footer(config_help_text());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are configuration errors; --help stays exit 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (synth->parsed()) {
    synth_cfg.attr_model = attr_model_from_string(synth_attr_model);
    Rng rng(synth_seed);
    Json summary;
    summary["seed"] = synth_seed;
    summary["layout"] = synth_layout;
    summary["attr_model"] = synth_attr_model;
    summary["noise"] = synth_cfg.noise;
    if (synth_layout == "zsl") {
      ZslDataset data = generate_synthetic_zsl(synth_cfg, rng);
      save_dataset(synth_prefix, data);
      summary["seen_classes"] = data.seen_class_ids.size();
      summary["unseen_classes"] = data.unseen_class_ids.size();
      summary["seen_train_rows"] = data.seen_train.size();
      summary["seen_test_rows"] = data.seen_test.size();
      summary["unseen_test_rows"] = data.unseen_test.size();
    } else if (synth_layout == "pool") {
      const std::size_t k = synth_cfg.seen_classes + synth_cfg.unseen_classes;
      ClassPool pool = generate_synthetic_pool(k, synth_cfg.attr_dim, synth_cfg.feature_dim,
                                               synth_cfg.n_per_class, synth_cfg.attr_model,
                                               synth_cfg.noise, rng);
      save_pool(synth_prefix, pool);
      summary["classes"] = pool.n_classes();
      summary["train_rows"] = pool.train.size();
      summary["test_rows"] = pool.test.size();
    } else {
      throw ConfigError("synth: unknown layout '" + synth_layout + "'");
    }
    summary["prefix"] = synth_prefix;
    emit(summary.dump(2) + "\n", synth_out);
    return 0;
  }

  if (train_cmd->parsed()) {
    TrainConfig config = build_train_config(train_config_path, train_overrides, train_seed);
    ZslDataset data = load_dataset(train_data);
    TrainResult result = train(config, data);
    save_checkpoint(train_checkpoint, result.model);
    if (!train_log_path.empty()) {
      emit(to_jsonl(result.log), train_log_path);
    }
    Json summary;
    summary["seed"] = train_seed;
    summary["steps"] = result.log.steps;
    summary["final_loss"] =
        result.log.epochs.empty() ? Json(nullptr) : Json(result.log.epochs.back().mean_loss);
    summary["checkpoint"] = train_checkpoint;
    emit(summary.dump(2) + "\n", train_out);
    return 0;
  }

  if (eval_cmd->parsed()) {
    TrainedModel model = load_checkpoint(eval_checkpoint);
    ZslDataset data = load_dataset(eval_data);
    LogitConfig cfg = model.config.logit_config();
    if (eval_gamma) cfg.gamma = *eval_gamma;
    cfg.seen_scale = eval_seen_scale;
    EvalReport report = gzsl_eval(model, data, cfg);
    const std::vector<double> grid{1.0, 0.95, 0.9, 0.85, 0.8};
    report.ausuc = ausuc(model, data, cfg.gamma, grid);
    emit(eval_format == "csv" ? to_csv(report) : to_json(report), eval_out);
    return 0;
  }

  if (gamma_cmd->parsed()) {
    Json j;
    const double g = optimal_gamma(gamma_nu, gamma_dz);
    j["nu"] = gamma_nu;
    j["d_z"] = gamma_dz;
    j["gamma"] = g;
    j["predicted_variance_at_gamma"] = predicted_ns_variance(g, gamma_dz);
    emit(j.dump(2) + "\n", gamma_out);
    return 0;
  }

  if (lab_cmd->parsed()) {
    Rng rng(lab_seed);
    std::vector<VarianceReport> reports;
    const bool all = lab_experiment == "all";
    if (all || lab_experiment == "cosine") {
      std::vector<std::size_t> dims = lab_dims;
      if (dims.empty()) dims = {32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
      const std::size_t trials = lab_trials > 0 ? lab_trials : 100000;
      auto cosine = synthetic_cosine_experiment(dims, lab_gamma, trials, rng.substream(0));
      reports.insert(reports.end(), cosine.begin(), cosine.end());
    }
    if (all || lab_experiment == "statement2") {
      const std::size_t trials = lab_trials > 0 ? lab_trials : 10000;
      PrelogitExperiment exp;
      exp.n_hidden_layers = 0;
      exp.class_norm = false;
      exp.output_init = {InitKind::xavier_fan_out, InitDistribution::normal};
      exp.attribute_source = AttributeSource::unit_norm;
      VarianceReport unit = prelogit_variance_experiment(exp, trials, rng.substream(1));
      unit.setting = "statement2_unit_norm";
      reports.push_back(unit);
      exp.attribute_source = AttributeSource::raw;
      VarianceReport raw = prelogit_variance_experiment(exp, trials, rng.substream(2));
      raw.setting = "statement2_raw";
      reports.push_back(raw);
    }
    if (all || lab_experiment == "statement3") {
      const std::size_t trials = lab_trials > 0 ? lab_trials : 10000;
      PrelogitExperiment exp;
      exp.n_hidden_layers = 2;
      exp.class_norm = true;
      exp.output_init = {InitKind::cn_output, InitDistribution::normal};
      exp.attribute_source = AttributeSource::unit_norm;
      VarianceReport cn = prelogit_variance_experiment(exp, trials, rng.substream(3));
      cn.setting = "statement3_cn";
      reports.push_back(cn);
      exp.class_norm = false;
      exp.output_init = {InitKind::xavier_fan_out, InitDistribution::normal};
      VarianceReport xavier = prelogit_variance_experiment(exp, trials, rng.substream(4));
      xavier.setting = "statement3_xavier_no_cn";
      reports.push_back(xavier);
    }
    if (reports.empty()) {
      throw ConfigError("variance-lab: unknown experiment '" + lab_experiment + "'");
    }
    emit(lab_format == "csv" ? to_csv(reports) : to_json(reports), lab_out);
    return 0;
  }

  if (attr_cmd->parsed()) {
    Matrix attrs = load_attribute_csv(attr_path);
    emit(to_json(attribute_diagnostics(attrs)), attr_out);
    return 0;
  }

  if (probe_cmd->parsed()) {
    ExperimentConfig config =
        build_experiment_config(probe_config_path, probe_overrides, probe_seed);
    ZslDataset data = load_dataset(probe_data);

    TrainConfig zsl_cfg = config.train;
    zsl_cfg.epochs = 1;

    auto train_steps = [&](TrainConfig cfg) {
      cfg.seed = probe_seed;
      Rng rng(cfg.seed);
      Rng init_rng = rng.substream(0);
      Rng shuffle_rng = rng.substream(1);
      TrainedModel model;
      model.config = cfg;
      Matrix seen_attrs(data.seen_class_ids.size(), data.attributes.cols());
      for (std::size_t i = 0; i < data.seen_class_ids.size(); ++i) {
        const auto row = data.attributes.row(static_cast<std::size_t>(data.seen_class_ids[i]));
        std::copy(row.begin(), row.end(), seen_attrs.row(i).begin());
      }
      model.preproc = AttributePreprocState::fit(cfg.attribute_preproc, seen_attrs);
      EmbedderConfig ec;
      ec.attr_dim = data.attributes.cols();
      ec.hidden_dim = cfg.hidden_dim;
      ec.feature_dim = data.seen_train.features.cols();
      ec.n_hidden_layers = cfg.n_hidden_layers;
      ec.class_norm = cfg.class_norm;
      ec.body_init = cfg.body_init;
      ec.output_init = cfg.resolved_output_init();
      model.embedder = Embedder(ec, init_rng);
      Matrix class_attrs = model.preproc.apply(seen_attrs);
      run_training_steps(model.embedder, cfg, class_attrs, data.seen_class_ids, data.seen_train,
                         probe_train_steps, shuffle_rng, nullptr, nullptr);
      return model;
    };

    TrainConfig cn_cfg = zsl_cfg;
    cn_cfg.class_norm = true;
    cn_cfg.output_init.reset();
    TrainConfig plain_zsl_cfg = zsl_cfg;
    plain_zsl_cfg.class_norm = false;
    plain_zsl_cfg.output_init.reset();

    TrainedModel zsl_cn = train_steps(cn_cfg);
    TrainedModel zsl_plain = train_steps(plain_zsl_cfg);

    // Matched supervised classifier: same layer count and hidden width,
    // trained on the same features with the same optimizer settings.
    MlpClassifier classifier = [&] {
      Rng rng(probe_seed);
      Rng init_rng = rng.substream(0);
      std::map<int, int> local;
      for (std::size_t i = 0; i < data.seen_class_ids.size(); ++i) {
        local[data.seen_class_ids[i]] = static_cast<int>(i);
      }
      MlpClassifier model(data.seen_train.features.cols(), config.train.hidden_dim,
                          config.train.n_hidden_layers, data.seen_class_ids.size(),
                          config.train.body_init, init_rng);
      LabeledFeatures local_data = data.seen_train;
      for (int& label : local_data.labels) label = local.at(label);
      Rng shuffle_rng = rng.substream(1);
      auto params = model.parameters();
      AdamConfig ac;
      ac.lr = config.train.lr;
      AdamState adam(params, ac);
      std::vector<std::size_t> order(local_data.size());
      std::iota(order.begin(), order.end(), 0);
      const std::size_t batch = std::min(config.train.batch_size, local_data.size());
      std::size_t step = 0;
      while (step < probe_train_steps) {
        for (std::size_t i = order.size(); i-- > 1;) {
          const std::size_t j = shuffle_rng.next_below(i + 1);
          std::swap(order[i], order[j]);
        }
        for (std::size_t start = 0; start < local_data.size() && step < probe_train_steps;
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
          Matrix logits = model.forward(x, &cache);
          LossResult loss = cross_entropy_loss(logits, y, 0.0);
          MlpStack::Gradients grads = model.backward(cache, loss.grad_logits);
          std::vector<ParamView> grad_views;
          for (std::size_t li = 0; li < grads.weights.size(); ++li) {
            grad_views.push_back({grads.weights[li].data(), grads.weights[li].size()});
            grad_views.push_back({grads.biases[li].data(), grads.biases[li].size()});
          }
          adam.step(params, grad_views);
        }
      }
      return model;
    }();

    Rng probe_rng(splitmix64(probe_seed));
    ZslSmoothnessTarget cn_target(zsl_cn, data);
    ZslSmoothnessTarget plain_target(zsl_plain, data);
    std::map<int, int> local_ids;
    for (std::size_t i = 0; i < data.seen_class_ids.size(); ++i) {
      local_ids[data.seen_class_ids[i]] = static_cast<int>(i);
    }
    LabeledFeatures classifier_data = data.seen_train;
    for (int& label : classifier_data.labels) label = local_ids.at(label);
    ClassifierSmoothnessTarget clf_target(classifier, classifier_data);

    Json j;
    j["seed"] = probe_seed;
    j["n_batches"] = probe_batches;
    j["batch_size"] = probe_batch_size;
    j["zsl"] = smoothness_probe(plain_target, probe_batches, probe_batch_size,
                                probe_rng, probe_perturb_attrs);
    j["zsl_class_norm"] = smoothness_probe(cn_target, probe_batches, probe_batch_size, probe_rng,
                                           probe_perturb_attrs);
    j["classifier"] =
        smoothness_probe(clf_target, probe_batches, probe_batch_size, probe_rng, false);
    emit(j.dump(2) + "\n", probe_out);
    return 0;
  }

  if (czsl_cmd->parsed()) {
    ExperimentConfig experiment =
        build_experiment_config(czsl_config_path, czsl_overrides, czsl_seed);
    CzslConfig config = make_czsl_config(experiment);
    config.base.seed = czsl_seed;
    ClassPool pool = load_pool(czsl_data);
    Rng rng(splitmix64(czsl_seed + 1));
    std::optional<std::vector<std::size_t>> sizes;
    if (!czsl_sizes.empty()) sizes = czsl_sizes;
    TaskSequence seq = split_tasks(pool, czsl_tasks, sizes, rng);
    const CzslMethod method = czsl_method_from_string(czsl_method);

    AccuracyMatrix acc;
    CzslMetrics metrics;
    if (czsl_cv_tasks > 0) {
      std::vector<CzslConfig> grid{config};
      CzslCvResult cv = czsl_cross_validate(method, grid, seq, czsl_cv_tasks);
      acc = cv.final_run;
      metrics = cv.final_metrics;
    } else {
      acc = run_sequence(method, seq, config);
      metrics = czsl_metrics(acc);
    }
    const double f = acc.timesteps.size() >= 2 ? forgetting(per_task_accuracy_matrix(acc)) : 0.0;
    emit(czsl_format == "csv" ? to_csv(acc) : to_json(acc, metrics, f), czsl_out);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    TrainedModel model = load_checkpoint(sweep_checkpoint);
    ZslDataset data = load_dataset(sweep_data);
    const double gamma = sweep_gamma.value_or(model.config.gamma);
    auto points = sweep_seen_scale(model, data, gamma, sweep_grid);
    const double area = ausuc(model, data, gamma, sweep_grid);
    emit(sweep_format == "csv" ? to_csv(points) : to_json(points, area), sweep_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
