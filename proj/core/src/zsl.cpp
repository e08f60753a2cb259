#include "zslnorm/zsl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "zslnorm/errors.hpp"
#include "zslnorm/loss.hpp"
#include "zslnorm/normalization.hpp"

namespace zslnorm {

AttributePreproc attribute_preproc_from_string(const std::string& name) {
  if (name == "an") return AttributePreproc::an;
  if (name == "standardize") return AttributePreproc::standardize;
  if (name == "none") return AttributePreproc::none;
  throw ConfigError("unknown attribute preprocessing: " + name);
}

std::string to_string(AttributePreproc preproc) {
  switch (preproc) {
    case AttributePreproc::an: return "an";
    case AttributePreproc::standardize: return "standardize";
    case AttributePreproc::none: return "none";
  }
  return "unknown";
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "adam") return OptimizerKind::adam;
  if (name == "sgd") return OptimizerKind::sgd;
  throw ConfigError("unknown optimizer: " + name);
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::adam ? "adam" : "sgd";
}

InitScheme TrainConfig::resolved_output_init() const {
  if (output_init) return *output_init;
  InitScheme scheme;
  scheme.kind = class_norm ? InitKind::cn_output : InitKind::xavier_fan_out;
  scheme.distribution = InitDistribution::uniform;
  return scheme;
}

LogitConfig TrainConfig::logit_config() const {
  LogitConfig cfg;
  cfg.mode = logit_mode;
  cfg.gamma = gamma;
  cfg.seen_scale = seen_scale;
  return cfg;
}

AttributePreprocState AttributePreprocState::fit(AttributePreproc kind,
                                                 const Matrix& train_attrs) {
  AttributePreprocState state;
  state.kind = kind;
  if (kind == AttributePreproc::standardize) {
    if (train_attrs.rows() < 2) {
      throw InsufficientDataError("attribute standardization needs at least 2 classes");
    }
    constexpr double kEpsilon = 1e-5;
    const std::size_t n = train_attrs.rows();
    const std::size_t p = train_attrs.cols();
    state.col_mean.assign(p, 0.0);
    state.col_divisor.assign(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += train_attrs(i, j);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = train_attrs(i, j) - mean;
        var += d * d;
      }
      var /= static_cast<double>(n);
      state.col_mean[j] = mean;
      state.col_divisor[j] = std::max(std::sqrt(var), kEpsilon);
    }
  }
  return state;
}

Matrix AttributePreprocState::apply(const Matrix& attrs) const {
  switch (kind) {
    case AttributePreproc::none:
      return attrs;
    case AttributePreproc::an:
      return attribute_normalize(attrs);
    case AttributePreproc::standardize: {
      if (attrs.cols() != col_mean.size()) {
        throw DimensionError("attribute preprocessing: width mismatch");
      }
      Matrix out = attrs;
      for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
          out(i, j) = (out(i, j) - col_mean[j]) / col_divisor[j];
        }
      }
      return out;
    }
  }
  throw ConfigError("attribute preprocessing: unknown kind");
}

namespace {

Matrix gather_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(m.row(static_cast<std::size_t>(rows[i])).begin(),
              m.row(static_cast<std::size_t>(rows[i])).end(), out.row(i).begin());
  }
  return out;
}

struct Optimizer {
  OptimizerKind kind = OptimizerKind::adam;
  AdamState adam;
  SgdState sgd;

  Optimizer(const TrainConfig& config, std::span<const ParamView> params) : kind(config.optimizer) {
    if (kind == OptimizerKind::adam) {
      AdamConfig ac;
      ac.lr = config.lr;
      adam = AdamState(params, ac);
    } else {
      sgd = SgdState(params, config.lr, config.momentum);
    }
  }

  void step(std::span<const ParamView> params, std::span<const ParamView> grads) {
    if (kind == OptimizerKind::adam) {
      adam.step(params, grads);
    } else {
      sgd.step(params, grads);
    }
  }
};

Embedder build_embedder(const TrainConfig& config, std::size_t attr_dim, std::size_t feature_dim,
                        Rng& rng) {
  EmbedderConfig ec;
  ec.attr_dim = attr_dim;
  ec.hidden_dim = config.hidden_dim;
  ec.feature_dim = feature_dim;
  ec.n_hidden_layers = config.n_hidden_layers;
  ec.class_norm = config.class_norm;
  ec.body_init = config.body_init;
  ec.output_init = config.resolved_output_init();
  return Embedder(ec, rng);
}

}  // namespace

void run_training_steps(Embedder& embedder, const TrainConfig& config, const Matrix& class_attrs,
                        const std::vector<int>& class_ids, const LabeledFeatures& data,
                        std::size_t max_steps, Rng& shuffle_rng, TrainObserver* observer,
                        TrainLog* log) {
  if (class_attrs.rows() != class_ids.size()) {
    throw DimensionError("run_training_steps: attribute rows != class count");
  }
  if (data.empty()) {
    throw DataError("run_training_steps: empty training set");
  }
  std::map<int, int> local_of;
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    local_of[class_ids[i]] = static_cast<int>(i);
  }
  std::vector<int> local_labels(data.labels.size());
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    auto it = local_of.find(data.labels[i]);
    if (it == local_of.end()) {
      throw LabelError("run_training_steps: label " + std::to_string(data.labels[i]) +
                       " not among the training classes");
    }
    local_labels[i] = it->second;
  }

  const std::size_t n = data.size();
  const std::size_t batch = std::min(config.batch_size, n);
  const std::size_t steps_per_epoch = (n + batch - 1) / batch;
  const std::size_t budget =
      max_steps > 0 ? max_steps : config.epochs * steps_per_epoch;

  auto params = embedder.parameters();
  Optimizer optimizer(config, params);
  const LogitConfig logit_cfg{config.logit_mode, config.gamma, 1.0};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::size_t step = 0;
  std::size_t epoch = 0;
  Embedder::Cache cache;
  LogitsCache logits_cache;
  while (step < budget) {
    for (std::size_t i = n; i-- > 1;) {
      const std::size_t j = shuffle_rng.next_below(i + 1);
      std::swap(order[i], order[j]);
    }
    double epoch_loss = 0.0;
    std::size_t epoch_steps = 0;
    for (std::size_t start = 0; start < n && step < budget; start += batch) {
      const std::size_t end = std::min(start + batch, n);
      Matrix z(end - start, data.features.cols());
      std::vector<int> y(end - start);
      for (std::size_t i = start; i < end; ++i) {
        std::copy(data.features.row(order[i]).begin(), data.features.row(order[i]).end(),
                  z.row(i - start).begin());
        y[i - start] = local_labels[order[i]];
      }

      Matrix prototypes = embedder.forward(class_attrs, Mode::train, &cache);
      Matrix logits = compute_logits(z, prototypes, logit_cfg, &logits_cache);
      LossResult loss = cross_entropy_loss(logits, y, config.entropy_weight);
      LogitsGradients lg =
          compute_logits_backward(loss.grad_logits, z, prototypes, logit_cfg, logits_cache);
      GradientTape tape = embedder.backward(cache, lg.d_w);
      auto grad_views = tape.views();
      if (config.grad_clip > 0.0) {
        clip_gradient_norm(grad_views, config.grad_clip);
      }
      optimizer.step(params, grad_views);

      if (observer != nullptr) observer->on_step(step, logits, loss.value);
      epoch_loss += loss.value;
      ++epoch_steps;
      ++step;
    }
    ++epoch;
    if (log != nullptr && epoch_steps > 0) {
      log->epochs.push_back({epoch, epoch_loss / static_cast<double>(epoch_steps)});
    }
  }
  if (log != nullptr) log->steps += step;
}

TrainResult train(const TrainConfig& config, const ZslDataset& data, TrainObserver* observer) {
  data.validate();
  if (data.seen_train.empty()) {
    throw DataError("train: no seen training data");
  }
  Rng rng(config.seed);
  Rng init_rng = rng.substream(0);
  Rng shuffle_rng = rng.substream(1);

  TrainResult result;
  Matrix seen_attrs = gather_rows(data.attributes, data.seen_class_ids);
  result.model.preproc = AttributePreprocState::fit(config.attribute_preproc, seen_attrs);
  result.model.config = config;
  result.model.embedder =
      build_embedder(config, data.attributes.cols(), data.seen_train.features.cols(), init_rng);

  Matrix class_attrs = result.model.preproc.apply(seen_attrs);
  run_training_steps(result.model.embedder, config, class_attrs, data.seen_class_ids,
                     data.seen_train, 0, shuffle_rng, observer, &result.log);
  return result;
}

double harmonic_mean(double u, double s) {
  return u + s > 0.0 ? 2.0 * u * s / (u + s) : 0.0;
}

double per_class_accuracy(std::span<const int> predictions, std::span<const int> truth,
                          const std::vector<int>& class_ids, std::map<int, double>* per_class) {
  if (predictions.size() != truth.size()) {
    throw DimensionError("per_class_accuracy: prediction/label count mismatch");
  }
  std::map<int, std::pair<std::size_t, std::size_t>> counts;  // class -> (correct, total)
  for (int c : class_ids) counts[c] = {0, 0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto it = counts.find(truth[i]);
    if (it == counts.end()) continue;
    ++it->second.second;
    if (predictions[i] == truth[i]) ++it->second.first;
  }
  double sum = 0.0;
  std::size_t populated = 0;
  for (const auto& [c, pair] : counts) {
    if (pair.second == 0) continue;
    const double acc = static_cast<double>(pair.first) / static_cast<double>(pair.second);
    if (per_class != nullptr) (*per_class)[c] = acc;
    sum += acc;
    ++populated;
  }
  if (populated == 0) {
    throw DataError("per_class_accuracy: no test rows for any listed class");
  }
  return sum / static_cast<double>(populated);
}

Matrix class_prototypes(const TrainedModel& model, const Matrix& attributes) {
  Matrix preprocessed = model.preproc.apply(attributes);
  // Eval-mode forward is const in effect; the embedder copy keeps this a
  // pure function even on a const model.
  Embedder embedder = model.embedder;
  return embedder.forward(preprocessed, Mode::eval);
}

namespace {

std::vector<int> argmax_rows(const Matrix& logits) {
  std::vector<int> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c) {
      if (logits(i, c) > logits(i, best)) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

Matrix scale_seen_columns(const Matrix& logits, const std::vector<bool>& seen_mask, double s) {
  Matrix out = logits;
  for (std::size_t n = 0; n < out.rows(); ++n) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      if (seen_mask[c]) out(n, c) *= s;
    }
  }
  return out;
}

}  // namespace

std::vector<int> predict(const TrainedModel& model, const ZslDataset& data, const Matrix& features,
                         const LogitConfig& cfg) {
  Matrix prototypes = class_prototypes(model, data.attributes);
  Matrix logits = compute_logits(features, prototypes, cfg);
  Matrix scaled = cfg.seen_scale == 1.0
                      ? std::move(logits)
                      : scale_seen_columns(logits, data.seen_mask(), cfg.seen_scale);
  return argmax_rows(scaled);
}

EvalReport gzsl_eval(const TrainedModel& model, const ZslDataset& data, const LogitConfig& cfg) {
  data.validate();
  if (data.seen_test.empty() || data.unseen_test.empty()) {
    throw DataError("gzsl_eval: need test rows on both sides of the split");
  }
  if (!(cfg.seen_scale > 0.0 && cfg.seen_scale <= 1.0)) {
    throw ConfigError("gzsl_eval: seen scale must lie in (0, 1]");
  }
  Matrix prototypes = class_prototypes(model, data.attributes);

  EvalReport report;
  report.seen_scale_used = cfg.seen_scale;

  const std::vector<bool> mask = data.seen_mask();
  auto eval_side = [&](const LabeledFeatures& side, const std::vector<int>& class_ids) {
    Matrix logits = compute_logits(side.features, prototypes, cfg);
    Matrix scaled = scale_seen_columns(logits, mask, cfg.seen_scale);
    std::vector<int> preds = argmax_rows(scaled);
    return per_class_accuracy(preds, side.labels, class_ids, &report.per_class_accuracy);
  };
  report.gzsl_s = eval_side(data.seen_test, data.seen_class_ids);
  report.gzsl_u = eval_side(data.unseen_test, data.unseen_class_ids);
  report.gzsl_h = harmonic_mean(report.gzsl_u, report.gzsl_s);
  return report;
}

std::vector<ScalePoint> sweep_seen_scale(const TrainedModel& model, const ZslDataset& data,
                                         double gamma, std::span<const double> grid) {
  data.validate();
  LogitConfig cfg = model.config.logit_config();
  cfg.gamma = gamma;
  Matrix prototypes = class_prototypes(model, data.attributes);
  Matrix seen_logits = compute_logits(data.seen_test.features, prototypes, cfg);
  Matrix unseen_logits = compute_logits(data.unseen_test.features, prototypes, cfg);
  const std::vector<bool> mask = data.seen_mask();

  std::vector<ScalePoint> points;
  points.reserve(grid.size());
  for (double s : grid) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ConfigError("sweep_seen_scale: scales must lie in [0, 1]");
    }
    ScalePoint point;
    point.scale = s;
    std::vector<int> seen_preds = argmax_rows(scale_seen_columns(seen_logits, mask, s));
    std::vector<int> unseen_preds = argmax_rows(scale_seen_columns(unseen_logits, mask, s));
    point.gzsl_s = per_class_accuracy(seen_preds, data.seen_test.labels, data.seen_class_ids);
    point.gzsl_u =
        per_class_accuracy(unseen_preds, data.unseen_test.labels, data.unseen_class_ids);
    point.gzsl_h = harmonic_mean(point.gzsl_u, point.gzsl_s);
    points.push_back(point);
  }
  return points;
}

double area_under_su_curve(std::vector<std::pair<double, double>> su_points) {
  if (su_points.empty()) return 0.0;
  std::sort(su_points.begin(), su_points.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  double area = 0.0;
  double prev_s = 0.0;
  double prev_u = su_points.front().second;
  for (const auto& [s, u] : su_points) {
    area += (s - prev_s) * 0.5 * (prev_u + u);
    prev_s = s;
    prev_u = u;
  }
  return area;
}

double ausuc(const TrainedModel& model, const ZslDataset& data, double gamma,
             std::span<const double> grid) {
  if (grid.size() < 5) {
    throw ConfigError("ausuc: grid needs at least 5 points");
  }
  std::vector<double> scales(grid.begin(), grid.end());
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) {
      throw ConfigError("ausuc: grid scales must lie in (0, 1]");
    }
  }
  // Extend with the extremes: seen logits suppressed entirely and untouched.
  scales.push_back(0.0);
  scales.push_back(1.0);
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());

  const auto points = sweep_seen_scale(model, data, gamma, scales);
  std::vector<std::pair<double, double>> su;
  su.reserve(points.size());
  for (const auto& p : points) su.emplace_back(p.gzsl_s, p.gzsl_u);
  return area_under_su_curve(std::move(su));
}

CvResult cross_validate(std::span<const TrainConfig> grid, const ZslDataset& data,
                        double val_unseen_class_fraction, double val_seen_example_fraction,
                        std::uint64_t seed) {
  if (grid.empty()) {
    throw ConfigError("cross_validate: empty configuration grid");
  }
  if (!(val_unseen_class_fraction > 0.0 && val_unseen_class_fraction < 1.0) ||
      !(val_seen_example_fraction > 0.0 && val_seen_example_fraction < 1.0)) {
    throw ConfigError("cross_validate: holdout fractions must lie in (0, 1)");
  }
  data.validate();
  const std::size_t k_seen = data.seen_class_ids.size();
  const std::size_t n_val_unseen = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(val_unseen_class_fraction * k_seen)));
  if (n_val_unseen >= k_seen - 1) {
    throw DataError("cross_validate: too few seen classes to split");
  }

  Rng rng(seed);
  std::vector<int> shuffled = data.seen_class_ids;
  for (std::size_t i = shuffled.size(); i-- > 1;) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(shuffled[i], shuffled[j]);
  }
  std::vector<int> val_unseen(shuffled.begin(), shuffled.begin() + n_val_unseen);
  std::vector<int> train_seen(shuffled.begin() + n_val_unseen, shuffled.end());
  std::sort(val_unseen.begin(), val_unseen.end());
  std::sort(train_seen.begin(), train_seen.end());

  // Compact the class universe to the original seen classes.
  std::map<int, int> compact;
  std::vector<int> ordered = data.seen_class_ids;
  for (std::size_t i = 0; i < ordered.size(); ++i) compact[ordered[i]] = static_cast<int>(i);

  ZslDataset inner;
  inner.attributes = Matrix(ordered.size(), data.attributes.cols());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    std::copy(data.attributes.row(static_cast<std::size_t>(ordered[i])).begin(),
              data.attributes.row(static_cast<std::size_t>(ordered[i])).end(),
              inner.attributes.row(i).begin());
  }
  for (int c : train_seen) inner.seen_class_ids.push_back(compact[c]);
  for (int c : val_unseen) inner.unseen_class_ids.push_back(compact[c]);

  auto remap = [&](LabeledFeatures lf) {
    for (int& label : lf.labels) label = compact[label];
    return lf;
  };
  LabeledFeatures train_pool = remap(filter_classes(data.seen_train, train_seen));
  inner.unseen_test = remap(filter_classes(data.seen_train, val_unseen));

  // Stratified example holdout: the first fraction of each class's rows
  // (after a seeded shuffle) becomes validation-seen data.
  std::map<int, std::vector<std::size_t>> rows_of;
  for (std::size_t i = 0; i < train_pool.labels.size(); ++i) {
    rows_of[train_pool.labels[i]].push_back(i);
  }
  std::set<std::size_t> holdout;
  for (auto& [c, rows] : rows_of) {
    for (std::size_t i = rows.size(); i-- > 1;) {
      const std::size_t j = rng.next_below(i + 1);
      std::swap(rows[i], rows[j]);
    }
    const std::size_t m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(val_seen_example_fraction * rows.size())));
    if (m >= rows.size()) {
      throw DataError("cross_validate: class " + std::to_string(c) +
                      " has too few examples to split");
    }
    for (std::size_t i = 0; i < m; ++i) holdout.insert(rows[i]);
  }
  LabeledFeatures inner_train, inner_val;
  inner_train.features = Matrix(train_pool.size() - holdout.size(), train_pool.features.cols());
  inner_val.features = Matrix(holdout.size(), train_pool.features.cols());
  std::size_t tr = 0, va = 0;
  for (std::size_t i = 0; i < train_pool.size(); ++i) {
    if (holdout.count(i) != 0) {
      std::copy(train_pool.features.row(i).begin(), train_pool.features.row(i).end(),
                inner_val.features.row(va).begin());
      inner_val.labels.push_back(train_pool.labels[i]);
      ++va;
    } else {
      std::copy(train_pool.features.row(i).begin(), train_pool.features.row(i).end(),
                inner_train.features.row(tr).begin());
      inner_train.labels.push_back(train_pool.labels[i]);
      ++tr;
    }
  }
  inner.seen_train = std::move(inner_train);
  inner.seen_test = std::move(inner_val);
  inner.validate();

  CvResult result;
  bool have_best = false;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    TrainResult run = train(grid[gi], inner);
    EvalReport report = gzsl_eval(run.model, inner, grid[gi].logit_config());
    result.table.push_back({gi, report});
    const bool better = [&] {
      if (!have_best) return true;
      const EvalReport& best = result.table[result.best_index].report;
      if (report.gzsl_h != best.gzsl_h) return report.gzsl_h > best.gzsl_h;
      if (grid[gi].gamma != grid[result.best_index].gamma) {
        return grid[gi].gamma < grid[result.best_index].gamma;
      }
      if (grid[gi].lr != grid[result.best_index].lr) {
        return grid[gi].lr < grid[result.best_index].lr;
      }
      return false;
    }();
    if (better) {
      result.best_index = gi;
      have_best = true;
    }
  }
  result.best = grid[result.best_index];
  return result;
}

}  // namespace zslnorm
