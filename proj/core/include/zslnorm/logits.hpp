#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zslnorm/matrix.hpp"

namespace zslnorm {

enum class LogitMode { dot, normalize_scale };

struct LogitConfig {
  LogitMode mode = LogitMode::normalize_scale;
  double gamma = 5.0;       // scaled-cosine temperature, logits bounded by gamma^2
  double seen_scale = 1.0;  // evaluation-time multiplier for seen-class logits
};

struct LogitsCache {
  std::vector<double> z_norms;
  std::vector<double> w_norms;
  Matrix cosines;  // N x K, only filled in normalize_scale mode
};

/// Z: N x d, W: K x d -> N x K. dot mode is Z * W^T; normalize_scale is
/// gamma^2 times the cosine similarity per (n, c). Zero rows are rejected in
/// normalize_scale mode.
Matrix compute_logits(const Matrix& z, const Matrix& w, const LogitConfig& cfg,
                      LogitsCache* cache = nullptr);

struct LogitsGradients {
  Matrix d_z;
  Matrix d_w;
};

LogitsGradients compute_logits_backward(const Matrix& grad_logits, const Matrix& z,
                                        const Matrix& w, const LogitConfig& cfg,
                                        const LogitsCache& cache);

/// Multiply the columns of seen classes by s in (0, 1].
Matrix apply_seen_scale(const Matrix& logits, const std::vector<bool>& seen_column_mask, double s);

/// Closed-form variance of the scaled cosine logit: gamma^4 * d_z / (d_z - 2)^2.
double predicted_ns_variance(double gamma, std::size_t d_z);

/// gamma achieving a desired scaled-cosine logit variance nu:
/// (nu * (d_z - 2)^2 / d_z)^(1/4). Exact inverse of predicted_ns_variance.
double optimal_gamma(double nu, std::size_t d_z);

/// Closed-form pre-logit variance d_z * var_z * var_v * mean_sq_norm, where
/// mean_sq_norm is the mean squared norm of the embedder's penultimate input.
double predicted_prelogit_variance(std::size_t d_z, double var_z, double var_v,
                                   double mean_sq_norm);

}  // namespace zslnorm
