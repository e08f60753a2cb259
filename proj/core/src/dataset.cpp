#include "zslnorm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "zslnorm/errors.hpp"
#include "zslnorm/init.hpp"

namespace zslnorm {

void LabeledFeatures::append(const LabeledFeatures& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (features.cols() != other.features.cols()) {
    throw DimensionError("LabeledFeatures::append: feature widths differ");
  }
  Matrix merged(features.rows() + other.features.rows(), features.cols());
  std::copy(features.flat().begin(), features.flat().end(), merged.data());
  std::copy(other.features.flat().begin(), other.features.flat().end(),
            merged.data() + features.size());
  features = std::move(merged);
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

std::vector<bool> ZslDataset::seen_mask() const {
  std::vector<bool> mask(n_classes(), false);
  for (int c : seen_class_ids) mask[static_cast<std::size_t>(c)] = true;
  return mask;
}

void ZslDataset::validate() const {
  const int k = static_cast<int>(n_classes());
  std::set<int> seen(seen_class_ids.begin(), seen_class_ids.end());
  std::set<int> unseen(unseen_class_ids.begin(), unseen_class_ids.end());
  if (seen.size() != seen_class_ids.size() || unseen.size() != unseen_class_ids.size()) {
    throw DataError("ZslDataset: duplicate class ids in seen/unseen lists");
  }
  for (int c : seen) {
    if (unseen.count(c) != 0) {
      throw DataError("ZslDataset: class " + std::to_string(c) + " is both seen and unseen");
    }
  }
  if (static_cast<int>(seen.size() + unseen.size()) != k) {
    throw DataError("ZslDataset: seen/unseen ids do not partition the attribute rows");
  }
  auto check_labels = [&](const LabeledFeatures& data, const std::set<int>& allowed,
                          const char* name) {
    if (data.features.rows() != data.labels.size()) {
      throw DataError(std::string("ZslDataset: ") + name + " row/label count mismatch");
    }
    for (int label : data.labels) {
      if (label < 0 || label >= k) {
        throw DataError(std::string("ZslDataset: ") + name + " label " + std::to_string(label) +
                        " has no attribute row");
      }
      if (allowed.count(label) == 0) {
        throw DataError(std::string("ZslDataset: ") + name + " label " + std::to_string(label) +
                        " is on the wrong side of the split");
      }
    }
  };
  check_labels(seen_train, seen, "seen_train");
  check_labels(seen_test, seen, "seen_test");
  check_labels(unseen_test, unseen, "unseen_test");
}

AttrModel attr_model_from_string(const std::string& name) {
  if (name == "gaussian") return AttrModel::gaussian;
  if (name == "lognormal") return AttrModel::lognormal;
  throw ConfigError("unknown attribute model: " + name);
}

std::string to_string(AttrModel model) {
  return model == AttrModel::gaussian ? "gaussian" : "lognormal";
}

ClassPool generate_synthetic_pool(std::size_t n_classes, std::size_t attr_dim,
                                  std::size_t feature_dim, std::size_t n_per_class,
                                  AttrModel attr_model, double noise, Rng& rng) {
  if (n_classes < 1 || attr_dim < 1 || feature_dim < 1 || n_per_class < 1) {
    throw ConfigError("generate_synthetic_pool: all counts must be >= 1");
  }
  if (noise < 0.0) {
    throw ConfigError("generate_synthetic_pool: noise must be >= 0");
  }

  ClassPool pool;
  pool.attributes = Matrix(n_classes, attr_dim);
  for (double& v : pool.attributes.flat()) {
    v = rng.next_normal();
    if (attr_model == AttrModel::lognormal) v = std::exp(v);
  }

  // Fixed random map attribute -> class center; tanh keeps centers bounded
  // and makes the map nonlinear in the attributes.
  Matrix map = standard_normal_matrix(attr_dim, feature_dim, rng);
  const double map_scale = 1.0 / std::sqrt(static_cast<double>(attr_dim));
  Matrix centers = matmul(pool.attributes, map);
  for (double& v : centers.flat()) v = std::tanh(v * map_scale);

  const std::size_t n_total = n_classes * n_per_class;
  auto sample_split = [&]() {
    LabeledFeatures out;
    out.features = Matrix(n_total, feature_dim);
    out.labels.resize(n_total);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
        out.labels[row] = static_cast<int>(c);
        for (std::size_t j = 0; j < feature_dim; ++j) {
          out.features(row, j) = centers(c, j) + (noise > 0.0 ? noise * rng.next_normal() : 0.0);
        }
      }
    }
    return out;
  };
  pool.train = sample_split();
  pool.test = sample_split();
  return pool;
}

LabeledFeatures filter_classes(const LabeledFeatures& data, const std::vector<int>& class_ids) {
  std::set<int> keep(class_ids.begin(), class_ids.end());
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (keep.count(data.labels[i]) != 0) rows.push_back(i);
  }
  LabeledFeatures out;
  out.features = Matrix(rows.size(), data.features.cols());
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(data.features.row(rows[i]).begin(), data.features.row(rows[i]).end(),
              out.features.row(i).begin());
    out.labels[i] = data.labels[rows[i]];
  }
  return out;
}

ZslDataset generate_synthetic_zsl(const SyntheticConfig& config, Rng& rng) {
  if (config.seen_classes < 2) {
    throw ConfigError("generate_synthetic_zsl: need at least 2 seen classes");
  }
  if (config.unseen_classes < 1) {
    throw ConfigError("generate_synthetic_zsl: need at least 1 unseen class");
  }
  const std::size_t k = config.seen_classes + config.unseen_classes;
  ClassPool pool = generate_synthetic_pool(k, config.attr_dim, config.feature_dim,
                                           config.n_per_class, config.attr_model, config.noise,
                                           rng);

  // Random seen/unseen assignment via Fisher-Yates on the class ids.
  std::vector<int> ids(k);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = k; i-- > 1;) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(ids[i], ids[j]);
  }

  ZslDataset data;
  data.attributes = std::move(pool.attributes);
  data.seen_class_ids.assign(ids.begin(), ids.begin() + config.seen_classes);
  data.unseen_class_ids.assign(ids.begin() + config.seen_classes, ids.end());
  std::sort(data.seen_class_ids.begin(), data.seen_class_ids.end());
  std::sort(data.unseen_class_ids.begin(), data.unseen_class_ids.end());
  data.seen_train = filter_classes(pool.train, data.seen_class_ids);
  data.seen_test = filter_classes(pool.test, data.seen_class_ids);
  data.unseen_test = filter_classes(pool.test, data.unseen_class_ids);
  data.validate();
  return data;
}

ZslDataset shuffle_train_labels(const ZslDataset& data, Rng& rng) {
  ZslDataset out = data;
  auto& labels = out.seen_train.labels;
  for (std::size_t i = labels.size(); i-- > 1;) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(labels[i], labels[j]);
  }
  return out;
}

}  // namespace zslnorm
