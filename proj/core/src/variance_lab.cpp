#include "zslnorm/variance_lab.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "zslnorm/errors.hpp"
#include "zslnorm/loss.hpp"
#include "zslnorm/normalization.hpp"

namespace zslnorm {

std::vector<VarianceReport> synthetic_cosine_experiment(std::span<const std::size_t> d_list,
                                                        double gamma, std::size_t trials,
                                                        const Rng& rng, int n_threads) {
  if (trials < 2) {
    throw InsufficientDataError("synthetic_cosine_experiment: need at least 2 trials");
  }
  std::vector<VarianceReport> reports;
  reports.reserve(d_list.size());
  for (std::size_t di = 0; di < d_list.size(); ++di) {
    const std::size_t d = d_list[di];
    const double g2 = gamma * gamma;
    // Dedicated substream per dimensionality so adding dimensions to the
    // list never changes earlier results.
    Rng d_rng = rng.substream(di);
    auto sampler = [d, g2](Rng& r) {
      double xy = 0.0, xx = 0.0, yy = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double x = r.next_normal();
        const double y = r.next_normal();
        xy += x * y;
        xx += x * x;
        yy += y * y;
      }
      return g2 * xy / std::sqrt(xx * yy);
    };
    const McResult mc = mc_estimate(sampler, trials, d_rng, n_threads);

    VarianceReport report;
    report.setting = "cosine";
    report.d = d;
    report.gamma = gamma;
    report.predicted = predicted_ns_variance(gamma, d);
    report.empirical = mc.variance;
    report.stderr_of_empirical = mc.stderr_of_variance;
    report.trials = trials;
    reports.push_back(std::move(report));
  }
  return reports;
}

AttributeSource attribute_source_from_string(const std::string& name) {
  if (name == "unit_norm") return AttributeSource::unit_norm;
  if (name == "raw") return AttributeSource::raw;
  if (name == "standardized") return AttributeSource::standardized;
  throw ConfigError("unknown attribute source: " + name);
}

std::string to_string(AttributeSource source) {
  switch (source) {
    case AttributeSource::unit_norm: return "unit_norm";
    case AttributeSource::raw: return "raw";
    case AttributeSource::standardized: return "standardized";
  }
  return "unknown";
}

VarianceReport prelogit_variance_experiment(const PrelogitExperiment& experiment,
                                            std::size_t trials, const Rng& rng, int n_threads) {
  if (trials < 2) {
    throw InsufficientDataError("prelogit_variance_experiment: need at least 2 trials");
  }
  if (experiment.n_classes < 2) {
    throw ConfigError("prelogit_variance_experiment: need at least 2 classes");
  }

  // Fixed attribute set for the whole experiment.
  Rng attr_rng = rng.substream(~std::uint64_t{0});
  Matrix attrs(experiment.n_classes, experiment.attr_dim);
  for (double& v : attrs.flat()) {
    v = attr_rng.next_normal();
    if (experiment.attr_model == AttrModel::lognormal) v = std::exp(v);
  }
  switch (experiment.attribute_source) {
    case AttributeSource::unit_norm:
      attrs = attribute_normalize(attrs);
      break;
    case AttributeSource::standardized:
      attrs = attribute_standardize(attrs);
      break;
    case AttributeSource::raw:
      break;
  }
  double mean_sq_norm = 0.0;
  for (std::size_t c = 0; c < attrs.rows(); ++c) mean_sq_norm += dot(attrs.row(c), attrs.row(c));
  mean_sq_norm /= static_cast<double>(attrs.rows());

  EmbedderConfig ec;
  ec.attr_dim = experiment.attr_dim;
  ec.hidden_dim = experiment.hidden_dim;
  ec.feature_dim = experiment.feature_dim;
  ec.n_hidden_layers = experiment.n_hidden_layers;
  ec.class_norm = experiment.class_norm;
  ec.body_init = experiment.body_init;
  ec.output_init = experiment.output_init;

  const std::size_t k = experiment.n_classes;
  const double z_sd = std::sqrt(experiment.feature_variance);
  const std::size_t d_z = experiment.feature_dim;

  // One trial = fresh weights + fresh z, pre-logits for every class.
  std::vector<double> values(trials * k);
  constexpr std::size_t kChunk = 64;
  const std::size_t n_chunks = (trials + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::size_t chunk) {
    Rng sub = rng.substream(chunk);
    const std::size_t lo = chunk * kChunk;
    const std::size_t hi = std::min(lo + kChunk, trials);
    for (std::size_t trial = lo; trial < hi; ++trial) {
      Embedder embedder(ec, sub);
      Matrix prototypes = embedder.forward(attrs, Mode::train);
      std::vector<double> z(d_z);
      for (double& v : z) v = z_sd * sub.next_normal();
      for (std::size_t c = 0; c < k; ++c) {
        values[trial * k + c] = dot(z, prototypes.row(c));
      }
    }
  };
  unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;

  const std::size_t hidden_out =
      experiment.n_hidden_layers == 0 ? experiment.attr_dim : experiment.hidden_dim;
  std::optional<std::size_t> d_extra;
  if (experiment.output_init.kind == InitKind::cn_output) d_extra = hidden_out;
  if (experiment.output_init.kind == InitKind::linear_corrected) d_extra = experiment.attr_dim;
  const double var_v = init_variance(experiment.output_init.kind, hidden_out, d_z, d_extra);
  const double assumed_msn = experiment.class_norm
                                 ? static_cast<double>(hidden_out)
                                 : (experiment.attribute_source == AttributeSource::raw
                                        ? mean_sq_norm
                                        : 1.0);

  VarianceReport report;
  report.setting = experiment.class_norm ? "prelogit_cn" : "prelogit";
  report.d = d_z;
  report.gamma = 1.0;
  report.predicted =
      predicted_prelogit_variance(d_z, experiment.feature_variance, var_v, assumed_msn);
  report.empirical = m2;
  // Values within a trial share z and weights; treating trials as the
  // independent unit keeps the error bar honest.
  report.stderr_of_empirical = std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(trials));
  report.trials = trials;
  return report;
}

LogitVarianceProbe::LogitVarianceProbe(std::size_t every_n) : every_n_(every_n == 0 ? 1 : every_n) {}

void LogitVarianceProbe::on_step(std::size_t step, const Matrix& logits, double /*loss*/) {
  attached_ = true;
  if (step % every_n_ != 0) return;
  double mean = 0.0;
  for (double v : logits.flat()) mean += v;
  mean /= static_cast<double>(logits.size());
  double var = 0.0;
  for (double v : logits.flat()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(logits.size());
  trace_.iterations.push_back(step);
  trace_.values.push_back(var);
}

const ProbeTrace& LogitVarianceProbe::trace() const {
  if (!attached_) {
    throw StateError("LogitVarianceProbe: probe was never attached to a training run");
  }
  return trace_;
}

double smoothness_probe(SmoothnessTarget& target, std::size_t n_batches, std::size_t batch_size,
                        Rng& rng, bool perturb_attributes) {
  if (target.dataset_size() == 0) {
    throw InsufficientDataError("smoothness_probe: empty dataset");
  }
  if (n_batches == 0 || batch_size == 0) {
    throw ConfigError("smoothness_probe: batch counts must be positive");
  }
  const double inv_params = 1.0 / static_cast<double>(target.parameter_count());
  double total = 0.0;
  std::vector<std::size_t> rows(batch_size);
  for (std::size_t b = 0; b < n_batches; ++b) {
    for (std::size_t i = 0; i < batch_size; ++i) {
      rows[i] = rng.next_below(target.dataset_size());
    }
    total += target.gradient_norm_on_batch(rows, rng, perturb_attributes) * inv_params;
  }
  return total / static_cast<double>(n_batches);
}

ZslSmoothnessTarget::ZslSmoothnessTarget(const TrainedModel& model, const ZslDataset& data)
    : model_(model), data_(&data) {
  Matrix seen_attrs(data.seen_class_ids.size(), data.attributes.cols());
  std::map<int, int> local;
  for (std::size_t i = 0; i < data.seen_class_ids.size(); ++i) {
    const int c = data.seen_class_ids[i];
    std::copy(data.attributes.row(static_cast<std::size_t>(c)).begin(),
              data.attributes.row(static_cast<std::size_t>(c)).end(), seen_attrs.row(i).begin());
    local[c] = static_cast<int>(i);
  }
  class_attrs_ = model_.preproc.apply(seen_attrs);
  local_labels_.reserve(data.seen_train.labels.size());
  for (int label : data.seen_train.labels) local_labels_.push_back(local.at(label));
}

std::size_t ZslSmoothnessTarget::parameter_count() const {
  return model_.embedder.parameter_count();
}

double ZslSmoothnessTarget::gradient_norm_on_batch(std::span<const std::size_t> rows,
                                                   Rng& noise_rng, bool perturb_attributes) {
  const std::size_t d_z = data_->seen_train.features.cols();
  Matrix z(rows.size(), d_z);
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = data_->seen_train.features.row(rows[i]);
    for (std::size_t j = 0; j < d_z; ++j) z(i, j) = src[j] + noise_rng.next_normal();
    y[i] = local_labels_[rows[i]];
  }
  Matrix attrs = class_attrs_;
  if (perturb_attributes) {
    for (double& v : attrs.flat()) v += noise_rng.next_normal();
  }

  const LogitConfig cfg{model_.config.logit_mode, model_.config.gamma, 1.0};
  Embedder::Cache cache;
  LogitsCache logits_cache;
  Matrix prototypes = model_.embedder.forward(attrs, Mode::train, &cache);
  Matrix logits = compute_logits(z, prototypes, cfg, &logits_cache);
  LossResult loss = cross_entropy_loss(logits, y, model_.config.entropy_weight);
  LogitsGradients lg =
      compute_logits_backward(loss.grad_logits, z, prototypes, cfg, logits_cache);
  GradientTape tape = model_.embedder.backward(cache, lg.d_w);
  return std::sqrt(tape.squared_norm());
}

ClassifierSmoothnessTarget::ClassifierSmoothnessTarget(const MlpClassifier& model,
                                                       const LabeledFeatures& data)
    : model_(model), data_(&data) {}

double ClassifierSmoothnessTarget::gradient_norm_on_batch(std::span<const std::size_t> rows,
                                                          Rng& noise_rng,
                                                          bool /*perturb_attributes*/) {
  const std::size_t d = data_->features.cols();
  Matrix x(rows.size(), d);
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = data_->features.row(rows[i]);
    for (std::size_t j = 0; j < d; ++j) x(i, j) = src[j] + noise_rng.next_normal();
    y[i] = data_->labels[rows[i]];
  }
  MlpStack::Cache cache;
  Matrix logits = model_.forward(x, &cache);
  LossResult loss = cross_entropy_loss(logits, y, 0.0);
  MlpStack::Gradients grads = model_.backward(cache, loss.grad_logits);
  double sq = 0.0;
  for (const Matrix& w : grads.weights) {
    for (double v : w.flat()) sq += v * v;
  }
  for (const auto& b : grads.biases) {
    for (double v : b) sq += v * v;
  }
  return std::sqrt(sq);
}

AttributeDiagnostics attribute_diagnostics(const Matrix& attrs) {
  if (attrs.rows() < 20) {
    throw InsufficientDataError("attribute_diagnostics: need at least 20 classes");
  }
  AttributeDiagnostics diag;

  Matrix standardized = attribute_standardize(attrs);
  std::vector<double> column(attrs.rows());
  std::vector<double> p_values;
  for (std::size_t j = 0; j < attrs.cols(); ++j) {
    for (std::size_t i = 0; i < attrs.rows(); ++i) column[i] = standardized(i, j);
    try {
      const NormalityResult r = normality_statistic(column);
      diag.per_dimension.push_back(r);
      p_values.push_back(r.p_value);
    } catch (const DegenerateError&) {
      diag.per_dimension.push_back(std::nullopt);
    }
  }

  diag.correlation = pairwise_abs_correlation(attrs);

  std::vector<double> sq_norms(attrs.rows());
  for (std::size_t i = 0; i < attrs.rows(); ++i) sq_norms[i] = dot(attrs.row(i), attrs.row(i));
  diag.sq_norm_summary = descriptive_stats(sq_norms);
  std::vector<double> sorted = sq_norms;
  std::sort(sorted.begin(), sorted.end());
  diag.sq_norm_deciles.resize(11);
  for (int q = 0; q <= 10; ++q) {
    const double pos = static_cast<double>(q) / 10.0 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    diag.sq_norm_deciles[q] = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  }

  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  diag.median_normality_p = median(p_values);
  diag.median_abs_corr = median(diag.correlation.mean_abs_corr);
  return diag;
}

}  // namespace zslnorm
