#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zslnorm/dataset.hpp"
#include "zslnorm/embedder.hpp"
#include "zslnorm/logits.hpp"
#include "zslnorm/matrix.hpp"
#include "zslnorm/optim.hpp"

namespace zslnorm {

enum class AttributePreproc { an, standardize, none };
enum class OptimizerKind { adam, sgd };

AttributePreproc attribute_preproc_from_string(const std::string& name);
std::string to_string(AttributePreproc preproc);
OptimizerKind optimizer_from_string(const std::string& name);
std::string to_string(OptimizerKind kind);

struct TrainConfig {
  std::size_t batch_size = 128;
  std::size_t epochs = 50;
  double lr = 0.0005;
  std::size_t hidden_dim = 2048;
  std::size_t n_hidden_layers = 2;
  double gamma = 5.0;
  double entropy_weight = 0.001;
  AttributePreproc attribute_preproc = AttributePreproc::an;
  bool class_norm = true;
  /// Output-projection init; nullopt resolves to cn_output when class_norm is
  /// on and xavier_fan_out otherwise.
  std::optional<InitScheme> output_init;
  InitScheme body_init{InitKind::xavier_fan_in, InitDistribution::uniform};
  LogitMode logit_mode = LogitMode::normalize_scale;
  double seen_scale = 1.0;  // evaluation-time default
  OptimizerKind optimizer = OptimizerKind::adam;
  double momentum = 0.9;   // sgd only
  double grad_clip = 0.0;  // global L2 clip, 0 disables
  std::uint64_t seed = 0;

  InitScheme resolved_output_init() const;
  LogitConfig logit_config() const;
};

/// Attribute preprocessing fitted at training time and replayed at
/// evaluation. `an` and `none` are stateless; `standardize` keeps the
/// per-column statistics of the training-class attributes.
struct AttributePreprocState {
  AttributePreproc kind = AttributePreproc::an;
  std::vector<double> col_mean;
  std::vector<double> col_divisor;

  static AttributePreprocState fit(AttributePreproc kind, const Matrix& train_attrs);
  Matrix apply(const Matrix& attrs) const;
};

struct TrainedModel {
  Embedder embedder;
  AttributePreprocState preproc;
  TrainConfig config;
};

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  std::size_t steps = 0;
  std::vector<std::pair<std::size_t, double>> probe_values;  // optional hook output
};

/// Step-level hook into the training loop. Observers only read.
class TrainObserver {
 public:
  virtual ~TrainObserver() = default;
  virtual void on_step(std::size_t step, const Matrix& logits, double loss) = 0;
};

struct TrainResult {
  TrainedModel model;
  TrainLog log;
};

/// Minibatch training on the seen split: every step embeds the full
/// training-class attribute matrix while features are minibatched.
/// Deterministic given config.seed.
TrainResult train(const TrainConfig& config, const ZslDataset& data,
                  TrainObserver* observer = nullptr);

/// Shared minibatch loop used by both train() and the continual runner.
/// class_attrs rows align with class_ids; labels must be global ids present
/// in class_ids. max_steps == 0 runs config.epochs full epochs.
void run_training_steps(Embedder& embedder, const TrainConfig& config, const Matrix& class_attrs,
                        const std::vector<int>& class_ids, const LabeledFeatures& data,
                        std::size_t max_steps, Rng& shuffle_rng, TrainObserver* observer,
                        TrainLog* log);

struct EvalReport {
  double gzsl_u = 0.0;
  double gzsl_s = 0.0;
  double gzsl_h = 0.0;
  double ausuc = 0.0;
  std::map<int, double> per_class_accuracy;
  double seen_scale_used = 1.0;
};

double harmonic_mean(double u, double s);

/// Mean per-class top-1 accuracy over the listed classes; classes without
/// test rows are skipped. Also returns the per-class map when requested.
double per_class_accuracy(std::span<const int> predictions, std::span<const int> truth,
                          const std::vector<int>& class_ids,
                          std::map<int, double>* per_class = nullptr);

/// Class prototypes for all attribute rows, in eval mode.
Matrix class_prototypes(const TrainedModel& model, const Matrix& attributes);

/// Joint-space argmax predictions for the given features.
std::vector<int> predict(const TrainedModel& model, const ZslDataset& data, const Matrix& features,
                         const LogitConfig& cfg);

/// Generalized ZSL evaluation over the joint label space.
EvalReport gzsl_eval(const TrainedModel& model, const ZslDataset& data, const LogitConfig& cfg);

struct ScalePoint {
  double scale = 1.0;
  double gzsl_u = 0.0;
  double gzsl_s = 0.0;
  double gzsl_h = 0.0;
};

/// GZSL metrics for every seen-logit scale in the grid.
std::vector<ScalePoint> sweep_seen_scale(const TrainedModel& model, const ZslDataset& data,
                                         double gamma, std::span<const double> grid);

/// Trapezoidal area of the unseen-vs-seen accuracy curve. Points are (S, U);
/// the curve is extended horizontally to S = 0 from its lowest-S point.
double area_under_su_curve(std::vector<std::pair<double, double>> su_points);

/// Area under the seen/unseen curve traced by sweeping the seen-logit scale
/// over the grid extended with the extremes s -> 0 and s = 1. Grid must hold
/// at least 5 points inside (0, 1].
double ausuc(const TrainedModel& model, const ZslDataset& data, double gamma,
             std::span<const double> grid);

struct CvEntry {
  std::size_t config_index = 0;
  EvalReport report;
};

struct CvResult {
  TrainConfig best;
  std::size_t best_index = 0;
  std::vector<CvEntry> table;
};

/// Carves validation-unseen classes out of the seen classes and
/// validation-seen examples out of the remainder, trains every candidate on
/// the reduced split and picks the best validation GZSL-H. Ties break toward
/// lower gamma, then lower lr, then declaration order.
CvResult cross_validate(std::span<const TrainConfig> grid, const ZslDataset& data,
                        double val_unseen_class_fraction, double val_seen_example_fraction,
                        std::uint64_t seed);

}  // namespace zslnorm
