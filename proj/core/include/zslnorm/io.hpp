#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zslnorm/dataset.hpp"
#include "zslnorm/zsl.hpp"

namespace zslnorm {

/// Binary feature file, little-endian throughout:
///   bytes 0-3   magic "ZSLF"
///   bytes 4-7   u32 version (currently 1)
///   bytes 8-15  u64 row count N
///   bytes 16-23 u64 feature width d
///   byte  24    u8 label flag (0 or 1)
///   payload     N*d f64 row-major
///   labels      N i32 (only when the flag is set)
void save_feature_file(const std::string& path, const Matrix& features,
                       const std::vector<int>* labels = nullptr);

struct FeatureFile {
  Matrix features;
  std::vector<int> labels;  // empty when the file carries none
  bool has_labels = false;
};

FeatureFile load_feature_file(const std::string& path);

/// Attribute CSV: one row per class, first column the class id, remaining
/// columns the attribute values. Rows must be rectangular and ids unique.
void save_attribute_csv(const std::string& path, const Matrix& attributes);

Matrix load_attribute_csv(const std::string& path);

/// Model checkpoint, little-endian binary:
///   magic "ZSLC", u32 version, u32 body layer count,
///   u64 attr/hidden-out/feature dims, u8 class_norm flag,
///   f64 cn momentum + epsilon,
///   per body layer: u64 in, u64 out, weights (in*out f64), bias (out f64),
///   output matrix (hidden_out * feature f64),
///   running mean + running var (hidden_out f64 each, class_norm only),
///   u8 preproc kind, u64 width, fitted mean + divisor (width f64 each).
/// A JSON sidecar "<path>.json" records the training hyperparameters.
void save_checkpoint(const std::string& path, const TrainedModel& model);

TrainedModel load_checkpoint(const std::string& path);

/// Convention for a dataset stored on disk under a common prefix:
/// <prefix>.seen_train.zslf, <prefix>.seen_test.zslf,
/// <prefix>.unseen_test.zslf, <prefix>.attrs.csv and <prefix>.manifest.json
/// (seen/unseen class id lists).
void save_dataset(const std::string& prefix, const ZslDataset& data);

ZslDataset load_dataset(const std::string& prefix);

/// All-class pool (continual-learning input): <prefix>.train.zslf,
/// <prefix>.test.zslf and <prefix>.attrs.csv.
void save_pool(const std::string& prefix, const ClassPool& pool);

ClassPool load_pool(const std::string& prefix);

}  // namespace zslnorm
