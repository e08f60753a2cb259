#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zslnorm/init.hpp"
#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"

namespace zslnorm {

enum class Activation { relu, identity };

struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation activation = Activation::relu;
};

/// Mutable view over one parameter buffer. Gradients use the same shape.
struct ParamView {
  double* data = nullptr;
  std::size_t size = 0;
};

struct DenseLayer {
  Matrix weight;  // in_dim x out_dim, applied as x * W + b
  std::vector<double> bias;
  Activation activation = Activation::relu;
};

/// Plain fully-connected stack with manual forward/backward passes.
class MlpStack {
 public:
  MlpStack() = default;
  MlpStack(std::span<const LayerSpec> specs, const InitScheme& init, Rng& rng);

  struct Cache {
    Matrix input;
    std::vector<Matrix> pre;   // pre-activation per layer
    std::vector<Matrix> post;  // activation output per layer
  };

  struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Matrix input;
  };

  Matrix forward(const Matrix& x, Cache* cache = nullptr) const;
  Gradients backward(const Cache& cache, const Matrix& grad_output) const;

  std::size_t n_layers() const { return layers_.size(); }
  std::size_t output_dim(std::size_t input_dim) const {
    return layers_.empty() ? input_dim : layers_.back().weight.cols();
  }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  void append_parameter_views(std::vector<ParamView>& out);
  std::size_t parameter_count() const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Standard supervised MLP classifier head (features -> class logits), used
/// as the non-zero-shot reference model in the smoothness comparisons.
class MlpClassifier {
 public:
  MlpClassifier(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_hidden_layers,
                std::size_t n_classes, const InitScheme& init, Rng& rng);

  Matrix forward(const Matrix& x, MlpStack::Cache* cache = nullptr) const {
    return stack_.forward(x, cache);
  }
  MlpStack::Gradients backward(const MlpStack::Cache& cache, const Matrix& grad_logits) const {
    return stack_.backward(cache, grad_logits);
  }

  MlpStack& stack() { return stack_; }
  const MlpStack& stack() const { return stack_; }
  std::vector<ParamView> parameters();
  std::size_t parameter_count() const { return stack_.parameter_count(); }
  std::size_t n_classes() const { return n_classes_; }

 private:
  MlpStack stack_;
  std::size_t n_classes_ = 0;
};

}  // namespace zslnorm
