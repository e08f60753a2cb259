#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "zslnorm/dataset.hpp"
#include "zslnorm/zsl.hpp"

namespace zslnorm {

struct Task {
  std::vector<int> class_ids;
  LabeledFeatures train;
  LabeledFeatures test;
};

/// Ordered continual tasks over disjoint class sets covering the pool.
struct TaskSequence {
  Matrix attributes;  // all classes, row index = class id
  std::vector<Task> tasks;

  std::size_t n_tasks() const { return tasks.size(); }
  std::vector<int> classes_up_to(std::size_t t) const;     // tasks [0, t]
  std::vector<int> classes_after(std::size_t t) const;     // tasks (t, T)
  LabeledFeatures test_up_to(std::size_t t) const;
  LabeledFeatures test_after(std::size_t t) const;
  LabeledFeatures all_test() const;
};

/// Random class-to-task partition. When sizes are omitted classes are divided
/// as evenly as possible with the smaller groups first (717 classes over 15
/// tasks gives 3 tasks of 47 then 12 of 48).
TaskSequence split_tasks(const ClassPool& pool, std::size_t n_tasks,
                         const std::optional<std::vector<std::size_t>>& sizes, Rng& rng);

/// GZSL view of the sequence at timestep t: task t's train split as seen
/// training data, tests of tasks <= t as seen, tests of tasks > t as unseen.
ZslDataset czsl_task_view(const TaskSequence& seq, std::size_t t);

/// Sub-sequence of tasks [first, first + count) with the class universe
/// compacted to the surviving classes (ids renumbered from 0).
TaskSequence slice_tasks(const TaskSequence& seq, std::size_t first, std::size_t count);

enum class CzslMethod { sequential, multi_task };

CzslMethod czsl_method_from_string(const std::string& name);
std::string to_string(CzslMethod method);

struct CzslConfig {
  TrainConfig base;
  std::size_t epochs_per_task = 5;
  double lr_decay_per_task = 1.0;
  std::vector<double> ausuc_grid{1.0, 0.95, 0.9, 0.85, 0.8};
};

struct TimestepRecord {
  double gzsl_s = 0.0;
  std::optional<double> gzsl_u;  // absent at the final task (no unseen left)
  std::optional<double> gzsl_h;
  std::optional<double> ausuc;
  double joint_accuracy = 0.0;
  std::vector<double> per_task_accuracy;  // a[t][tau] for tau <= t
};

struct AccuracyMatrix {
  std::vector<TimestepRecord> timesteps;
};

/// Runs the sequence with the per-task update budget
/// epochs_per_task * ceil(|D^t| / batch) for both methods. sequential keeps
/// training the persisting model on task t only; multi_task trains it on all
/// data up to t. After each task the model is evaluated with the full class
/// set as prediction space.
AccuracyMatrix run_sequence(CzslMethod method, const TaskSequence& seq, const CzslConfig& config);

struct CzslMetrics {
  double msa = 0.0;
  double mja = 0.0;
  std::optional<double> mua;   // undefined for single-task sequences
  std::optional<double> mh;
  std::optional<double> mauc;
};

CzslMetrics czsl_metrics(const AccuracyMatrix& acc);

/// Chaudhry/GEM-lineage forgetting: mean over tasks tau < T of the drop from
/// the best historical accuracy on tau to the final accuracy on tau.
/// Expects a lower-triangular matrix a[t][tau], tau <= t, with T >= 2 rows.
double forgetting(const std::vector<std::vector<double>>& per_task_acc);

std::vector<std::vector<double>> per_task_accuracy_matrix(const AccuracyMatrix& acc);

struct CzslCvResult {
  CzslConfig best;
  std::size_t best_index = 0;
  std::vector<std::pair<std::size_t, CzslMetrics>> table;
  AccuracyMatrix final_run;  // remaining tasks trained from scratch with best
  CzslMetrics final_metrics;
};

/// Grid search on the first n_cv_tasks tasks (validating on their test data),
/// then a fresh model trained on the remaining tasks with the winning
/// configuration.
CzslCvResult czsl_cross_validate(CzslMethod method, std::span<const CzslConfig> grid,
                                 const TaskSequence& seq, std::size_t n_cv_tasks = 3);

}  // namespace zslnorm
