#include "zslnorm/embedder.hpp"

#include <string>

#include "zslnorm/errors.hpp"

namespace zslnorm {

std::vector<ParamView> GradientTape::views() {
  std::vector<ParamView> out;
  for (std::size_t i = 0; i < body_weights.size(); ++i) {
    out.push_back({body_weights[i].data(), body_weights[i].size()});
    out.push_back({body_biases[i].data(), body_biases[i].size()});
  }
  out.push_back({output_matrix.data(), output_matrix.size()});
  return out;
}

void GradientTape::scale(double factor) {
  for (Matrix& m : body_weights) m *= factor;
  for (auto& b : body_biases) {
    for (double& v : b) v *= factor;
  }
  output_matrix *= factor;
}

double GradientTape::squared_norm() const {
  double s = 0.0;
  for (const Matrix& m : body_weights) {
    for (double v : m.flat()) s += v * v;
  }
  for (const auto& b : body_biases) {
    for (double v : b) s += v * v;
  }
  for (double v : output_matrix.flat()) s += v * v;
  return s;
}

Embedder::Embedder(const EmbedderConfig& config, Rng& rng) : config_(config) {
  if (config.attr_dim < 1 || config.feature_dim < 1) {
    throw DimensionError("Embedder: attr_dim and feature_dim must be >= 1");
  }
  if (config.n_hidden_layers > 0 && config.hidden_dim < 1) {
    throw DimensionError("Embedder: hidden_dim must be >= 1 when hidden layers exist");
  }
  std::vector<LayerSpec> specs;
  std::size_t in = config.attr_dim;
  for (std::size_t i = 0; i < config.n_hidden_layers; ++i) {
    specs.push_back({in, config.hidden_dim, Activation::relu});
    in = config.hidden_dim;
  }
  hidden_out_dim_ = in;
  body_ = MlpStack(specs, config.body_init, rng);
  if (config.class_norm) {
    standardizer_ = ClassStandardizer(hidden_out_dim_, config.cn_momentum, config.cn_epsilon);
  }

  std::optional<std::size_t> d_extra;
  if (config.output_init.kind == InitKind::cn_output) {
    d_extra = hidden_out_dim_;
  } else if (config.output_init.kind == InitKind::linear_corrected) {
    d_extra = config.attr_dim;
  }
  output_matrix_ = sample_init(config.output_init, hidden_out_dim_, config.feature_dim, rng, d_extra);
}

Matrix Embedder::forward(const Matrix& attributes, Mode mode, Cache* cache) {
  if (attributes.cols() != config_.attr_dim) {
    throw DimensionError("Embedder::forward: attribute width " +
                         std::to_string(attributes.cols()) + " != expected " +
                         std::to_string(config_.attr_dim));
  }
  Cache local;
  Cache* c = cache != nullptr ? cache : &local;
  c->valid = false;
  c->mode = mode;

  Matrix h = body_.forward(attributes, &c->body);
  Matrix s = config_.class_norm ? standardizer_.forward(h, mode, &c->cn) : std::move(h);
  Matrix w = matmul(s, output_matrix_);
  c->standardized = std::move(s);
  c->valid = true;
  return w;
}

GradientTape Embedder::backward(const Cache& cache, const Matrix& grad_prototypes) const {
  if (!cache.valid) {
    throw StateError("Embedder::backward: cache is missing or stale");
  }
  if (grad_prototypes.rows() != cache.standardized.rows() ||
      grad_prototypes.cols() != config_.feature_dim) {
    throw DimensionError("Embedder::backward: upstream gradient shape mismatch");
  }

  GradientTape tape;
  tape.output_matrix = transposed_matmul(cache.standardized, grad_prototypes);
  Matrix grad_s = matmul_transposed(grad_prototypes, output_matrix_);
  Matrix grad_h =
      config_.class_norm ? standardizer_.backward(cache.cn, grad_s) : std::move(grad_s);
  MlpStack::Gradients body_grads = body_.backward(cache.body, grad_h);
  tape.body_weights = std::move(body_grads.weights);
  tape.body_biases = std::move(body_grads.biases);
  return tape;
}

GradientTape Embedder::zero_tape() const {
  GradientTape tape;
  for (const DenseLayer& layer : body_.layers()) {
    tape.body_weights.emplace_back(layer.weight.rows(), layer.weight.cols());
    tape.body_biases.emplace_back(layer.bias.size(), 0.0);
  }
  tape.output_matrix = Matrix(output_matrix_.rows(), output_matrix_.cols());
  return tape;
}

std::vector<ParamView> Embedder::parameters() {
  std::vector<ParamView> out;
  body_.append_parameter_views(out);
  out.push_back({output_matrix_.data(), output_matrix_.size()});
  return out;
}

std::size_t Embedder::parameter_count() const {
  return body_.parameter_count() + output_matrix_.size();
}

bool Embedder::operator==(const Embedder& other) const {
  if (config_.attr_dim != other.config_.attr_dim ||
      config_.feature_dim != other.config_.feature_dim ||
      config_.n_hidden_layers != other.config_.n_hidden_layers ||
      config_.class_norm != other.config_.class_norm) {
    return false;
  }
  if (body_.layers().size() != other.body_.layers().size()) return false;
  for (std::size_t i = 0; i < body_.layers().size(); ++i) {
    if (!(body_.layers()[i] == other.body_.layers()[i])) return false;
  }
  if (!(output_matrix_ == other.output_matrix_)) return false;
  if (config_.class_norm) {
    if (standardizer_.running_mean() != other.standardizer_.running_mean()) return false;
    if (standardizer_.running_var() != other.standardizer_.running_var()) return false;
  }
  return true;
}

}  // namespace zslnorm
