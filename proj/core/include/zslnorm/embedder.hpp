#pragma once

#include <cstddef>
#include <vector>

#include "zslnorm/init.hpp"
#include "zslnorm/matrix.hpp"
#include "zslnorm/mlp.hpp"
#include "zslnorm/normalization.hpp"
#include "zslnorm/rng.hpp"

namespace zslnorm {

struct EmbedderConfig {
  std::size_t attr_dim = 0;
  std::size_t hidden_dim = 0;   // ignored when n_hidden_layers == 0
  std::size_t feature_dim = 0;
  std::size_t n_hidden_layers = 2;
  bool class_norm = true;
  InitScheme body_init{InitKind::xavier_fan_in, InitDistribution::uniform};
  InitScheme output_init{InitKind::cn_output, InitDistribution::uniform};
  double cn_momentum = 0.1;
  double cn_epsilon = 1e-5;
};

/// Gradients mirroring an Embedder's parameters.
struct GradientTape {
  std::vector<Matrix> body_weights;
  std::vector<std::vector<double>> body_biases;
  Matrix output_matrix;

  std::vector<ParamView> views();
  void scale(double factor);
  double squared_norm() const;
};

/// Attribute embedder: a ReLU MLP body, an optional class-wise
/// standardization layer with running statistics, and a bias-free output
/// projection. Prototypes for a class-attribute matrix A (K x d_a) are
/// W = body(A) -> standardize -> * V, giving K x d_z.
class Embedder {
 public:
  Embedder() = default;
  Embedder(const EmbedderConfig& config, Rng& rng);

  struct Cache {
    bool valid = false;
    Mode mode = Mode::train;
    MlpStack::Cache body;
    ClassStandardizer::Cache cn;
    Matrix standardized;  // input to the output projection
  };

  /// A: K x attr_dim -> W: K x feature_dim. Train mode updates the running
  /// class statistics; eval mode is a pure function.
  Matrix forward(const Matrix& attributes, Mode mode, Cache* cache = nullptr);

  /// Exact parameter gradients for the upstream prototype gradient dW,
  /// including the chain rule through the class-standardization statistics.
  GradientTape backward(const Cache& cache, const Matrix& grad_prototypes) const;

  GradientTape zero_tape() const;

  std::vector<ParamView> parameters();
  std::size_t parameter_count() const;

  std::size_t attr_dim() const { return config_.attr_dim; }
  std::size_t hidden_out_dim() const { return hidden_out_dim_; }
  std::size_t feature_dim() const { return config_.feature_dim; }
  bool class_norm_enabled() const { return config_.class_norm; }
  const EmbedderConfig& config() const { return config_; }

  MlpStack& body() { return body_; }
  const MlpStack& body() const { return body_; }
  ClassStandardizer& standardizer() { return standardizer_; }
  const ClassStandardizer& standardizer() const { return standardizer_; }
  Matrix& output_matrix() { return output_matrix_; }
  const Matrix& output_matrix() const { return output_matrix_; }

  bool operator==(const Embedder& other) const;

 private:
  EmbedderConfig config_;
  std::size_t hidden_out_dim_ = 0;
  MlpStack body_;
  ClassStandardizer standardizer_;
  Matrix output_matrix_;  // hidden_out_dim x feature_dim, no bias
};

inline bool operator==(const DenseLayer& a, const DenseLayer& b) {
  return a.weight == b.weight && a.bias == b.bias && a.activation == b.activation;
}

}  // namespace zslnorm
