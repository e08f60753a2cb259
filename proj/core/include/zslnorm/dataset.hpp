#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"

namespace zslnorm {

struct LabeledFeatures {
  Matrix features;          // N x d_z
  std::vector<int> labels;  // global class ids, one per row

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  void append(const LabeledFeatures& other);
};

/// All classes of a problem with per-class train/test splits. Class c's
/// attribute vector is row c of `attributes`.
struct ClassPool {
  Matrix attributes;  // K x d_a
  LabeledFeatures train;
  LabeledFeatures test;

  std::size_t n_classes() const { return attributes.rows(); }
};

/// Seen/unseen view of a pool: seen classes come with train and test data,
/// unseen classes with test data only.
struct ZslDataset {
  Matrix attributes;  // (K_s + K_u) x d_a, row index = class id
  std::vector<int> seen_class_ids;
  std::vector<int> unseen_class_ids;
  LabeledFeatures seen_train;
  LabeledFeatures seen_test;
  LabeledFeatures unseen_test;

  std::size_t n_classes() const { return attributes.rows(); }
  std::vector<bool> seen_mask() const;

  /// Checks the seen/unseen partition and that every label has an attribute
  /// row. Throws DataError on violations.
  void validate() const;
};

enum class AttrModel { gaussian, lognormal };

AttrModel attr_model_from_string(const std::string& name);
std::string to_string(AttrModel model);

struct SyntheticConfig {
  std::size_t seen_classes = 20;
  std::size_t unseen_classes = 5;
  std::size_t attr_dim = 32;
  std::size_t feature_dim = 128;
  std::size_t n_per_class = 40;  // per class, for each of train and test
  AttrModel attr_model = AttrModel::gaussian;
  double noise = 0.3;
};

/// Draws class attributes from the attribute model, maps them through a fixed
/// random linear map plus tanh to class centers in feature space, and samples
/// features as center + N(0, noise^2 I). Deterministic given the seed.
ClassPool generate_synthetic_pool(std::size_t n_classes, std::size_t attr_dim,
                                  std::size_t feature_dim, std::size_t n_per_class,
                                  AttrModel attr_model, double noise, Rng& rng);

/// Pool plus a random seen/unseen class assignment; unseen train data is
/// dropped.
ZslDataset generate_synthetic_zsl(const SyntheticConfig& config, Rng& rng);

/// Restrict a labeled set to the given classes.
LabeledFeatures filter_classes(const LabeledFeatures& data, const std::vector<int>& class_ids);

/// Dataset view with training labels shuffled among training rows (the
/// negative control for sanity checks).
ZslDataset shuffle_train_labels(const ZslDataset& data, Rng& rng);

}  // namespace zslnorm
