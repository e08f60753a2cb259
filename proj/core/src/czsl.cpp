#include "zslnorm/czsl.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "zslnorm/errors.hpp"

namespace zslnorm {

std::vector<int> TaskSequence::classes_up_to(std::size_t t) const {
  std::vector<int> out;
  for (std::size_t r = 0; r <= t && r < tasks.size(); ++r) {
    out.insert(out.end(), tasks[r].class_ids.begin(), tasks[r].class_ids.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> TaskSequence::classes_after(std::size_t t) const {
  std::vector<int> out;
  for (std::size_t r = t + 1; r < tasks.size(); ++r) {
    out.insert(out.end(), tasks[r].class_ids.begin(), tasks[r].class_ids.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabeledFeatures TaskSequence::test_up_to(std::size_t t) const {
  LabeledFeatures out;
  for (std::size_t r = 0; r <= t && r < tasks.size(); ++r) out.append(tasks[r].test);
  return out;
}

LabeledFeatures TaskSequence::test_after(std::size_t t) const {
  LabeledFeatures out;
  for (std::size_t r = t + 1; r < tasks.size(); ++r) out.append(tasks[r].test);
  return out;
}

LabeledFeatures TaskSequence::all_test() const {
  LabeledFeatures out;
  for (const Task& task : tasks) out.append(task.test);
  return out;
}

TaskSequence split_tasks(const ClassPool& pool, std::size_t n_tasks,
                         const std::optional<std::vector<std::size_t>>& sizes, Rng& rng) {
  const std::size_t k = pool.n_classes();
  if (n_tasks < 1 || n_tasks > k) {
    throw ConfigError("split_tasks: task count must lie in [1, n_classes]");
  }
  std::vector<std::size_t> task_sizes;
  if (sizes) {
    if (sizes->size() != n_tasks) {
      throw ConfigError("split_tasks: sizes list length != task count");
    }
    std::size_t total = 0;
    for (std::size_t s : *sizes) {
      if (s == 0) throw ConfigError("split_tasks: empty task requested");
      total += s;
    }
    if (total != k) {
      throw ConfigError("split_tasks: sizes sum to " + std::to_string(total) + ", expected " +
                        std::to_string(k));
    }
    task_sizes = *sizes;
  } else {
    // Smaller groups first: base-size tasks, then the remainder as +1 tasks.
    const std::size_t base = k / n_tasks;
    const std::size_t remainder = k % n_tasks;
    task_sizes.assign(n_tasks, base);
    for (std::size_t i = n_tasks - remainder; i < n_tasks; ++i) ++task_sizes[i];
  }

  std::vector<int> ids(k);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = k; i-- > 1;) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(ids[i], ids[j]);
  }

  TaskSequence seq;
  seq.attributes = pool.attributes;
  std::size_t offset = 0;
  for (std::size_t t = 0; t < n_tasks; ++t) {
    Task task;
    task.class_ids.assign(ids.begin() + offset, ids.begin() + offset + task_sizes[t]);
    std::sort(task.class_ids.begin(), task.class_ids.end());
    task.train = filter_classes(pool.train, task.class_ids);
    task.test = filter_classes(pool.test, task.class_ids);
    seq.tasks.push_back(std::move(task));
    offset += task_sizes[t];
  }
  return seq;
}

ZslDataset czsl_task_view(const TaskSequence& seq, std::size_t t) {
  if (t >= seq.n_tasks()) {
    throw ConfigError("czsl_task_view: timestep out of range");
  }
  ZslDataset view;
  view.attributes = seq.attributes;
  view.seen_class_ids = seq.classes_up_to(t);
  view.unseen_class_ids = seq.classes_after(t);
  view.seen_train = seq.tasks[t].train;
  view.seen_test = seq.test_up_to(t);
  view.unseen_test = seq.test_after(t);
  return view;
}

TaskSequence slice_tasks(const TaskSequence& seq, std::size_t first, std::size_t count) {
  if (first + count > seq.n_tasks()) {
    throw ConfigError("slice_tasks: range exceeds the sequence");
  }
  std::vector<int> kept;
  for (std::size_t t = first; t < first + count; ++t) {
    kept.insert(kept.end(), seq.tasks[t].class_ids.begin(), seq.tasks[t].class_ids.end());
  }
  std::sort(kept.begin(), kept.end());
  std::map<int, int> compact;
  for (std::size_t i = 0; i < kept.size(); ++i) compact[kept[i]] = static_cast<int>(i);

  TaskSequence out;
  out.attributes = Matrix(kept.size(), seq.attributes.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto row = seq.attributes.row(static_cast<std::size_t>(kept[i]));
    std::copy(row.begin(), row.end(), out.attributes.row(i).begin());
  }
  for (std::size_t t = first; t < first + count; ++t) {
    Task task = seq.tasks[t];
    for (int& c : task.class_ids) c = compact.at(c);
    for (int& label : task.train.labels) label = compact.at(label);
    for (int& label : task.test.labels) label = compact.at(label);
    out.tasks.push_back(std::move(task));
  }
  return out;
}

CzslMethod czsl_method_from_string(const std::string& name) {
  if (name == "sequential") return CzslMethod::sequential;
  if (name == "multi_task") return CzslMethod::multi_task;
  throw ConfigError("unknown CZSL method: " + name);
}

std::string to_string(CzslMethod method) {
  return method == CzslMethod::sequential ? "sequential" : "multi_task";
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

}  // namespace

AccuracyMatrix run_sequence(CzslMethod method, const TaskSequence& seq, const CzslConfig& config) {
  const std::size_t n_tasks = seq.n_tasks();
  if (n_tasks == 0) {
    throw ConfigError("run_sequence: empty task sequence");
  }
  const std::size_t d_a = seq.attributes.cols();
  const std::size_t d_z = seq.tasks.front().train.features.cols();

  Rng rng(config.base.seed);
  Rng init_rng = rng.substream(0);

  TrainedModel model;
  model.config = config.base;
  {
    EmbedderConfig ec;
    ec.attr_dim = d_a;
    ec.hidden_dim = config.base.hidden_dim;
    ec.feature_dim = d_z;
    ec.n_hidden_layers = config.base.n_hidden_layers;
    ec.class_norm = config.base.class_norm;
    ec.body_init = config.base.body_init;
    ec.output_init = config.base.resolved_output_init();
    model.embedder = Embedder(ec, init_rng);
  }

  const LogitConfig eval_cfg = config.base.logit_config();
  AccuracyMatrix acc;
  LabeledFeatures cumulative_train;

  for (std::size_t t = 0; t < n_tasks; ++t) {
    const Task& task = seq.tasks[t];
    cumulative_train.append(task.train);

    const bool sequential = method == CzslMethod::sequential;
    const LabeledFeatures& train_data = sequential ? task.train : cumulative_train;
    const std::vector<int> train_classes =
        sequential ? task.class_ids : seq.classes_up_to(t);

    // Equal per-task update budget regardless of how much data the method
    // sees: epochs_per_task full passes over task t.
    const std::size_t batch = std::min(config.base.batch_size, task.train.size());
    const std::size_t steps = config.epochs_per_task * ((task.train.size() + batch - 1) / batch);

    TrainConfig step_cfg = config.base;
    step_cfg.epochs = config.epochs_per_task;
    double lr = config.base.lr;
    for (std::size_t r = 0; r < t; ++r) lr *= config.lr_decay_per_task;
    step_cfg.lr = lr;

    Matrix train_attrs = gather_rows(seq.attributes, train_classes);
    model.preproc = AttributePreprocState::fit(step_cfg.attribute_preproc, train_attrs);
    Matrix class_attrs = model.preproc.apply(train_attrs);

    Rng shuffle_rng = rng.substream(1 + t);
    run_training_steps(model.embedder, step_cfg, class_attrs, train_classes, train_data, steps,
                       shuffle_rng, nullptr, nullptr);

    TimestepRecord record;
    if (t + 1 < n_tasks) {
      const ZslDataset view = czsl_task_view(seq, t);
      EvalReport report = gzsl_eval(model, view, eval_cfg);
      record.gzsl_s = report.gzsl_s;
      record.gzsl_u = report.gzsl_u;
      record.gzsl_h = report.gzsl_h;
      record.ausuc = ausuc(model, view, eval_cfg.gamma, config.ausuc_grid);
    } else {
      // Final task: everything is seen, GZSL-U and AUSUC are undefined.
      ZslDataset full;
      full.attributes = seq.attributes;
      full.seen_class_ids = seq.classes_up_to(t);
      full.seen_train = task.train;
      full.seen_test = seq.test_up_to(t);
      std::vector<int> preds =
          predict(model, full, full.seen_test.features, eval_cfg);
      record.gzsl_s = per_class_accuracy(preds, full.seen_test.labels, full.seen_class_ids);
    }

    // Joint accuracy and the forgetting matrix row share one prediction pass
    // over all test data.
    {
      ZslDataset full;
      full.attributes = seq.attributes;
      full.seen_class_ids = seq.classes_up_to(n_tasks - 1);
      const LabeledFeatures all_test = seq.all_test();
      std::vector<int> preds = predict(model, full, all_test.features, eval_cfg);
      record.joint_accuracy =
          per_class_accuracy(preds, all_test.labels, full.seen_class_ids);

      record.per_task_accuracy.resize(t + 1);
      std::size_t row = 0;
      std::vector<std::vector<int>> task_preds(n_tasks), task_truth(n_tasks);
      for (std::size_t r = 0; r < n_tasks; ++r) {
        for (std::size_t i = 0; i < seq.tasks[r].test.size(); ++i, ++row) {
          task_preds[r].push_back(preds[row]);
          task_truth[r].push_back(all_test.labels[row]);
        }
      }
      for (std::size_t tau = 0; tau <= t; ++tau) {
        record.per_task_accuracy[tau] = per_class_accuracy(
            task_preds[tau], task_truth[tau], seq.tasks[tau].class_ids);
      }
    }
    acc.timesteps.push_back(std::move(record));
  }
  return acc;
}

CzslMetrics czsl_metrics(const AccuracyMatrix& acc) {
  const std::size_t t_count = acc.timesteps.size();
  if (t_count == 0) {
    throw InsufficientDataError("czsl_metrics: empty accuracy matrix");
  }
  CzslMetrics m;
  for (const TimestepRecord& r : acc.timesteps) {
    m.msa += r.gzsl_s;
    m.mja += r.joint_accuracy;
  }
  m.msa /= static_cast<double>(t_count);
  m.mja /= static_cast<double>(t_count);

  if (t_count >= 2) {
    double mua = 0.0, mh = 0.0, mauc = 0.0;
    for (std::size_t t = 0; t + 1 < t_count; ++t) {
      const TimestepRecord& r = acc.timesteps[t];
      if (!r.gzsl_u || !r.gzsl_h || !r.ausuc) {
        throw DataError("czsl_metrics: missing unseen-side records before the final task");
      }
      mua += *r.gzsl_u;
      mh += *r.gzsl_h;
      mauc += *r.ausuc;
    }
    const double denom = static_cast<double>(t_count - 1);
    m.mua = mua / denom;
    m.mh = mh / denom;
    m.mauc = mauc / denom;
  }
  return m;
}

double forgetting(const std::vector<std::vector<double>>& per_task_acc) {
  const std::size_t t_count = per_task_acc.size();
  if (t_count < 2) {
    throw InsufficientDataError("forgetting: need at least 2 tasks");
  }
  for (std::size_t t = 0; t < t_count; ++t) {
    if (per_task_acc[t].size() != t + 1) {
      throw DimensionError("forgetting: matrix is not lower-triangular");
    }
  }
  double total = 0.0;
  for (std::size_t tau = 0; tau + 1 < t_count; ++tau) {
    double best = per_task_acc[tau][tau];
    for (std::size_t t = tau; t + 1 < t_count; ++t) {
      best = std::max(best, per_task_acc[t][tau]);
    }
    total += best - per_task_acc[t_count - 1][tau];
  }
  return total / static_cast<double>(t_count - 1);
}

std::vector<std::vector<double>> per_task_accuracy_matrix(const AccuracyMatrix& acc) {
  std::vector<std::vector<double>> out;
  out.reserve(acc.timesteps.size());
  for (const TimestepRecord& r : acc.timesteps) out.push_back(r.per_task_accuracy);
  return out;
}

CzslCvResult czsl_cross_validate(CzslMethod method, std::span<const CzslConfig> grid,
                                 const TaskSequence& seq, std::size_t n_cv_tasks) {
  if (grid.empty()) {
    throw ConfigError("czsl_cross_validate: empty configuration grid");
  }
  if (seq.n_tasks() <= n_cv_tasks) {
    throw ConfigError("czsl_cross_validate: need more tasks than the validation prefix");
  }

  const TaskSequence prefix = slice_tasks(seq, 0, n_cv_tasks);

  CzslCvResult result;
  bool have_best = false;
  std::vector<CzslMetrics> metrics_of(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    AccuracyMatrix acc = run_sequence(method, prefix, grid[gi]);
    metrics_of[gi] = czsl_metrics(acc);
    result.table.emplace_back(gi, metrics_of[gi]);
    const double score = metrics_of[gi].mh.value_or(metrics_of[gi].msa);
    const bool better = [&] {
      if (!have_best) return true;
      const double best_score =
          metrics_of[result.best_index].mh.value_or(metrics_of[result.best_index].msa);
      if (score != best_score) return score > best_score;
      if (grid[gi].base.gamma != grid[result.best_index].base.gamma) {
        return grid[gi].base.gamma < grid[result.best_index].base.gamma;
      }
      if (grid[gi].base.lr != grid[result.best_index].base.lr) {
        return grid[gi].base.lr < grid[result.best_index].base.lr;
      }
      return false;
    }();
    if (better) {
      result.best_index = gi;
      have_best = true;
    }
  }
  result.best = grid[result.best_index];

  // Fresh model on the remaining tasks with the winning configuration.
  const TaskSequence rest = slice_tasks(seq, n_cv_tasks, seq.n_tasks() - n_cv_tasks);
  result.final_run = run_sequence(method, rest, result.best);
  result.final_metrics = czsl_metrics(result.final_run);
  return result;
}

}  // namespace zslnorm
