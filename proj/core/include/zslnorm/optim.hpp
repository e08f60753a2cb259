#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zslnorm/mlp.hpp"

namespace zslnorm {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are laid out to mirror the
/// parameter views passed at construction.
class AdamState {
 public:
  AdamState() = default;
  AdamState(std::span<const ParamView> params, const AdamConfig& config);

  void step(std::span<const ParamView> params, std::span<const ParamView> grads);

  std::size_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::size_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

/// Classical momentum SGD: v = momentum * v + g; p -= lr * v.
class SgdState {
 public:
  SgdState() = default;
  SgdState(std::span<const ParamView> params, double lr, double momentum);

  void step(std::span<const ParamView> params, std::span<const ParamView> grads);

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  double momentum() const { return momentum_; }

 private:
  double lr_ = 1e-3;
  double momentum_ = 0.0;
  std::vector<std::vector<double>> velocity_;
};

/// Global L2 norm over all gradient buffers.
double gradient_norm(std::span<const ParamView> grads);

/// Rescales gradients in place when their global L2 norm exceeds max_norm.
/// Returns the pre-clip norm. max_norm <= 0 disables clipping.
double clip_gradient_norm(std::span<const ParamView> grads, double max_norm);

}  // namespace zslnorm
