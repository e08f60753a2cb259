#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zslnorm/dataset.hpp"
#include "zslnorm/stats.hpp"
#include "zslnorm/zsl.hpp"

namespace zslnorm {

struct VarianceReport {
  std::string setting;
  std::size_t d = 0;     // feature dimensionality of the experiment
  double gamma = 1.0;
  double predicted = 0.0;
  double empirical = 0.0;
  double stderr_of_empirical = 0.0;
  std::size_t trials = 0;
};

/// Samples x, y ~ N(0, I_d) per trial and measures the variance of
/// gamma^2 cos(x, y) against the closed-form prediction, for every d in the
/// list. Trials are deterministic given the rng seed.
std::vector<VarianceReport> synthetic_cosine_experiment(std::span<const std::size_t> d_list,
                                                        double gamma, std::size_t trials,
                                                        const Rng& rng, int n_threads = 0);

enum class AttributeSource { unit_norm, raw, standardized };

AttributeSource attribute_source_from_string(const std::string& name);
std::string to_string(AttributeSource source);

struct PrelogitExperiment {
  std::size_t n_classes = 16;
  std::size_t attr_dim = 16;
  std::size_t hidden_dim = 32;
  std::size_t feature_dim = 64;
  std::size_t n_hidden_layers = 0;  // 0 = linear embedder
  bool class_norm = false;
  InitScheme output_init{InitKind::xavier_fan_out, InitDistribution::normal};
  InitScheme body_init{InitKind::xavier_fan_in, InitDistribution::uniform};
  AttributeSource attribute_source = AttributeSource::unit_norm;
  AttrModel attr_model = AttrModel::gaussian;
  double feature_variance = 1.0;  // s^z
};

/// Resamples the embedder weights and a feature vector z ~ N(0, s^z I) per
/// trial, computes the pre-logits z . p_c for every class, and reports their
/// pooled variance against the closed-form prediction with the setting's
/// assumed mean squared norm (1 for unit-norm attributes, the realized mean
/// ||a||^2 for raw ones, d_h under class normalization).
VarianceReport prelogit_variance_experiment(const PrelogitExperiment& experiment,
                                            std::size_t trials, const Rng& rng,
                                            int n_threads = 0);

struct ProbeTrace {
  std::vector<std::size_t> iterations;
  std::vector<double> values;
};

/// Records the batch variance of the logits every n steps of a training run.
/// Purely observational.
class LogitVarianceProbe : public TrainObserver {
 public:
  explicit LogitVarianceProbe(std::size_t every_n);

  void on_step(std::size_t step, const Matrix& logits, double loss) override;

  bool attached() const { return attached_; }
  /// Throws StateError when the probe never saw a training run.
  const ProbeTrace& trace() const;

 private:
  std::size_t every_n_;
  bool attached_ = false;
  ProbeTrace trace_;
};

/// A model whose loss gradient can be probed on noisy batches.
class SmoothnessTarget {
 public:
  virtual ~SmoothnessTarget() = default;
  virtual std::size_t dataset_size() const = 0;
  virtual std::size_t parameter_count() const = 0;
  /// L2 norm of the loss gradient w.r.t. all parameters on the given rows,
  /// with N(0, 1) noise added to the batch features.
  virtual double gradient_norm_on_batch(std::span<const std::size_t> rows, Rng& noise_rng,
                                        bool perturb_attributes) = 0;
};

/// Mean over n_batches random batches (sampled with replacement) of the
/// parameter-gradient norm scaled by 1 / parameter_count. The default
/// protocol is 10 batches of 256.
double smoothness_probe(SmoothnessTarget& target, std::size_t n_batches, std::size_t batch_size,
                        Rng& rng, bool perturb_attributes = false);

/// Probe target wrapping a zero-shot model and its dataset.
class ZslSmoothnessTarget : public SmoothnessTarget {
 public:
  ZslSmoothnessTarget(const TrainedModel& model, const ZslDataset& data);

  std::size_t dataset_size() const override { return data_->seen_train.size(); }
  std::size_t parameter_count() const override;
  double gradient_norm_on_batch(std::span<const std::size_t> rows, Rng& noise_rng,
                                bool perturb_attributes) override;

 private:
  TrainedModel model_;  // private copy; running statistics may drift freely
  const ZslDataset* data_;
  Matrix class_attrs_;
  std::vector<int> local_labels_;
};

/// Probe target wrapping a plain supervised classifier.
class ClassifierSmoothnessTarget : public SmoothnessTarget {
 public:
  ClassifierSmoothnessTarget(const MlpClassifier& model, const LabeledFeatures& data);

  std::size_t dataset_size() const override { return data_->size(); }
  std::size_t parameter_count() const override { return model_.parameter_count(); }
  double gradient_norm_on_batch(std::span<const std::size_t> rows, Rng& noise_rng,
                                bool perturb_attributes) override;

 private:
  MlpClassifier model_;
  const LabeledFeatures* data_;
};

struct AttributeDiagnostics {
  std::vector<std::optional<NormalityResult>> per_dimension;  // null for constant columns
  CorrelationReport correlation;
  StatSummary sq_norm_summary;
  std::vector<double> sq_norm_deciles;  // 0%, 10%, ..., 100%
  double median_normality_p = 0.0;
  double median_abs_corr = 0.0;
};

/// Normality statistics of the standardized attribute columns, the pairwise
/// absolute-correlation distribution and a summary of the squared row norms.
/// Requires at least 20 classes.
AttributeDiagnostics attribute_diagnostics(const Matrix& attrs);

}  // namespace zslnorm
