#include "zslnorm/optim.hpp"

#include <cmath>

#include "zslnorm/errors.hpp"

namespace zslnorm {

namespace {

void check_aligned(std::span<const ParamView> params, std::span<const ParamView> grads,
                   const std::vector<std::vector<double>>& buffers) {
  if (params.size() != grads.size() || params.size() != buffers.size()) {
    throw DimensionError("optimizer step: parameter/gradient group counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size != grads[i].size || params[i].size != buffers[i].size()) {
      throw DimensionError("optimizer step: buffer size mismatch in group " + std::to_string(i));
    }
  }
}

}  // namespace

AdamState::AdamState(std::span<const ParamView> params, const AdamConfig& config)
    : config_(config) {
  if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 || config.beta2 >= 1.0) {
    throw ConfigError("AdamState: betas must lie in [0, 1)");
  }
  if (config.epsilon <= 0.0) {
    throw ConfigError("AdamState: epsilon must be positive");
  }
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const ParamView& p : params) {
    m_.emplace_back(p.size, 0.0);
    v_.emplace_back(p.size, 0.0);
  }
}

void AdamState::step(std::span<const ParamView> params, std::span<const ParamView> grads) {
  check_aligned(params, grads, m_);
  ++step_;
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(config_.beta1, t);
  const double bc2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data;
    const double* g = grads[i].data;
    double* m = m_[i].data();
    double* v = v_[i].data();
    for (std::size_t j = 0; j < params[i].size; ++j) {
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g[j];
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p[j] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

SgdState::SgdState(std::span<const ParamView> params, double lr, double momentum)
    : lr_(lr), momentum_(momentum) {
  if (momentum < 0.0 || momentum >= 1.0) {
    throw ConfigError("SgdState: momentum must lie in [0, 1)");
  }
  velocity_.reserve(params.size());
  for (const ParamView& p : params) velocity_.emplace_back(p.size, 0.0);
}

void SgdState::step(std::span<const ParamView> params, std::span<const ParamView> grads) {
  check_aligned(params, grads, velocity_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data;
    const double* g = grads[i].data;
    double* vel = velocity_[i].data();
    for (std::size_t j = 0; j < params[i].size; ++j) {
      vel[j] = momentum_ * vel[j] + g[j];
      p[j] -= lr_ * vel[j];
    }
  }
}

double gradient_norm(std::span<const ParamView> grads) {
  double s = 0.0;
  for (const ParamView& g : grads) {
    for (std::size_t j = 0; j < g.size; ++j) s += g.data[j] * g.data[j];
  }
  return std::sqrt(s);
}

double clip_gradient_norm(std::span<const ParamView> grads, double max_norm) {
  const double norm = gradient_norm(grads);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (const ParamView& g : grads) {
      for (std::size_t j = 0; j < g.size; ++j) g.data[j] *= scale;
    }
  }
  return norm;
}

}  // namespace zslnorm
