#include "zslnorm/mlp.hpp"

#include <string>

#include "zslnorm/errors.hpp"

namespace zslnorm {

MlpStack::MlpStack(std::span<const LayerSpec> specs, const InitScheme& init, Rng& rng) {
  layers_.reserve(specs.size());
  for (const LayerSpec& spec : specs) {
    if (spec.in_dim < 1 || spec.out_dim < 1) {
      throw DimensionError("MlpStack: layer dimensions must be >= 1");
    }
    DenseLayer layer;
    layer.weight = sample_init(init, spec.in_dim, spec.out_dim, rng);
    layer.bias.assign(spec.out_dim, 0.0);
    layer.activation = spec.activation;
    layers_.push_back(std::move(layer));
  }
}

Matrix MlpStack::forward(const Matrix& x, Cache* cache) const {
  if (!layers_.empty() && x.cols() != layers_.front().weight.rows()) {
    throw DimensionError("MlpStack::forward: input width " + std::to_string(x.cols()) +
                         " != first layer input " + std::to_string(layers_.front().weight.rows()));
  }
  if (cache != nullptr) {
    cache->input = x;
    cache->pre.clear();
    cache->post.clear();
  }
  Matrix h = x;
  for (const DenseLayer& layer : layers_) {
    Matrix pre = matmul(h, layer.weight);
    for (std::size_t r = 0; r < pre.rows(); ++r) {
      for (std::size_t c = 0; c < pre.cols(); ++c) pre(r, c) += layer.bias[c];
    }
    Matrix post = pre;
    if (layer.activation == Activation::relu) {
      for (double& v : post.flat()) {
        if (v < 0.0) v = 0.0;
      }
    }
    if (cache != nullptr) {
      cache->pre.push_back(pre);
      cache->post.push_back(post);
    }
    h = std::move(post);
  }
  return h;
}

MlpStack::Gradients MlpStack::backward(const Cache& cache, const Matrix& grad_output) const {
  if (cache.pre.size() != layers_.size()) {
    throw StateError("MlpStack::backward: cache does not match this stack");
  }
  Gradients g;
  g.weights.resize(layers_.size());
  g.biases.resize(layers_.size());

  Matrix grad = grad_output;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& layer = layers_[li];
    if (layer.activation == Activation::relu) {
      const Matrix& pre = cache.pre[li];
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (pre.flat()[i] <= 0.0) grad.flat()[i] = 0.0;
      }
    }
    const Matrix& layer_input = li == 0 ? cache.input : cache.post[li - 1];
    g.weights[li] = transposed_matmul(layer_input, grad);
    g.biases[li].assign(layer.weight.cols(), 0.0);
    for (std::size_t r = 0; r < grad.rows(); ++r) {
      for (std::size_t c = 0; c < grad.cols(); ++c) g.biases[li][c] += grad(r, c);
    }
    grad = matmul_transposed(grad, layer.weight);
  }
  g.input = std::move(grad);
  return g;
}

void MlpStack::append_parameter_views(std::vector<ParamView>& out) {
  for (DenseLayer& layer : layers_) {
    out.push_back({layer.weight.data(), layer.weight.size()});
    out.push_back({layer.bias.data(), layer.bias.size()});
  }
}

std::size_t MlpStack::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weight.size() + layer.bias.size();
  return n;
}

MlpClassifier::MlpClassifier(std::size_t input_dim, std::size_t hidden_dim,
                             std::size_t n_hidden_layers, std::size_t n_classes,
                             const InitScheme& init, Rng& rng)
    : n_classes_(n_classes) {
  std::vector<LayerSpec> specs;
  std::size_t in = input_dim;
  for (std::size_t i = 0; i < n_hidden_layers; ++i) {
    specs.push_back({in, hidden_dim, Activation::relu});
    in = hidden_dim;
  }
  specs.push_back({in, n_classes, Activation::identity});
  stack_ = MlpStack(specs, init, rng);
}

std::vector<ParamView> MlpClassifier::parameters() {
  std::vector<ParamView> out;
  stack_.append_parameter_views(out);
  return out;
}

}  // namespace zslnorm
