#include "zslnorm/logits.hpp"

#include <cmath>
#include <string>

#include "zslnorm/errors.hpp"

namespace zslnorm {

namespace {

std::vector<double> row_norms_checked(const Matrix& m, const char* label) {
  std::vector<double> norms(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    norms[i] = l2_norm(m.row(i));
    if (norms[i] == 0.0) {
      throw DegenerateError(std::string("compute_logits: zero-norm row ") + std::to_string(i) +
                            " in " + label);
    }
  }
  return norms;
}

}  // namespace

Matrix compute_logits(const Matrix& z, const Matrix& w, const LogitConfig& cfg,
                      LogitsCache* cache) {
  if (z.cols() != w.cols()) {
    throw DimensionError("compute_logits: feature dimensions differ (" +
                         std::to_string(z.cols()) + " vs " + std::to_string(w.cols()) + ")");
  }
  if (cfg.mode == LogitMode::dot) {
    return matmul_transposed(z, w);
  }
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
    throw ConfigError("compute_logits: normalize_scale needs finite gamma > 0");
  }
  const auto z_norms = row_norms_checked(z, "Z");
  const auto w_norms = row_norms_checked(w, "W");
  const double g2 = cfg.gamma * cfg.gamma;

  Matrix logits = matmul_transposed(z, w);
  Matrix cosines(z.rows(), w.rows());
  for (std::size_t n = 0; n < z.rows(); ++n) {
    for (std::size_t c = 0; c < w.rows(); ++c) {
      const double cosine = logits(n, c) / (z_norms[n] * w_norms[c]);
      cosines(n, c) = cosine;
      logits(n, c) = g2 * cosine;
    }
  }
  if (cache != nullptr) {
    cache->z_norms = z_norms;
    cache->w_norms = w_norms;
    cache->cosines = std::move(cosines);
  }
  return logits;
}

LogitsGradients compute_logits_backward(const Matrix& grad_logits, const Matrix& z,
                                        const Matrix& w, const LogitConfig& cfg,
                                        const LogitsCache& cache) {
  if (grad_logits.rows() != z.rows() || grad_logits.cols() != w.rows()) {
    throw DimensionError("compute_logits_backward: gradient shape mismatch");
  }
  LogitsGradients g;
  if (cfg.mode == LogitMode::dot) {
    g.d_z = matmul(grad_logits, w);
    g.d_w = transposed_matmul(grad_logits, z);
    return g;
  }
  const double g2 = cfg.gamma * cfg.gamma;
  const std::size_t n_rows = z.rows();
  const std::size_t k = w.rows();
  const std::size_t d = z.cols();

  g.d_z = Matrix(n_rows, d);
  g.d_w = Matrix(k, d);

  // d cos(z, w) / dw = (z_hat - cos * w_hat) / |w|, and symmetrically for z.
  for (std::size_t n = 0; n < n_rows; ++n) {
    const double* zrow = z.data() + n * d;
    double* dzrow = g.d_z.data() + n * d;
    double dz_self = 0.0;  // coefficient on z_n from all classes
    for (std::size_t c = 0; c < k; ++c) {
      const double upstream = grad_logits(n, c);
      if (upstream == 0.0) continue;
      const double* wrow = w.data() + c * d;
      double* dwrow = g.d_w.data() + c * d;
      const double cosine = cache.cosines(n, c);
      const double coeff = g2 * upstream;
      const double zw = 1.0 / (cache.z_norms[n] * cache.w_norms[c]);
      const double w_self = coeff * cosine / (cache.w_norms[c] * cache.w_norms[c]);
      dz_self += coeff * cosine / (cache.z_norms[n] * cache.z_norms[n]);
      for (std::size_t i = 0; i < d; ++i) {
        dwrow[i] += coeff * zw * zrow[i] - w_self * wrow[i];
        dzrow[i] += coeff * zw * wrow[i];
      }
    }
    for (std::size_t i = 0; i < d; ++i) dzrow[i] -= dz_self * zrow[i];
  }
  return g;
}

Matrix apply_seen_scale(const Matrix& logits, const std::vector<bool>& seen_column_mask,
                        double s) {
  if (seen_column_mask.size() != logits.cols()) {
    throw DimensionError("apply_seen_scale: mask length != class count");
  }
  if (!(s > 0.0 && s <= 1.0)) {
    throw ConfigError("apply_seen_scale: scale must lie in (0, 1]");
  }
  Matrix out = logits;
  if (s == 1.0) return out;
  for (std::size_t n = 0; n < out.rows(); ++n) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      if (seen_column_mask[c]) out(n, c) *= s;
    }
  }
  return out;
}

double predicted_ns_variance(double gamma, std::size_t d_z) {
  if (d_z < 3) {
    throw DomainError("predicted_ns_variance: d_z must be >= 3");
  }
  if (!(gamma > 0.0)) {
    throw DomainError("predicted_ns_variance: gamma must be positive");
  }
  const double d = static_cast<double>(d_z);
  const double g2 = gamma * gamma;
  return g2 * g2 * d / ((d - 2.0) * (d - 2.0));
}

double optimal_gamma(double nu, std::size_t d_z) {
  if (!(nu > 0.0)) {
    throw DomainError("optimal_gamma: nu must be positive");
  }
  if (d_z < 3) {
    throw DomainError("optimal_gamma: d_z must be >= 3");
  }
  const double d = static_cast<double>(d_z);
  return std::pow(nu * (d - 2.0) * (d - 2.0) / d, 0.25);
}

double predicted_prelogit_variance(std::size_t d_z, double var_z, double var_v,
                                   double mean_sq_norm) {
  if (d_z < 1 || !(var_z > 0.0) || !(var_v > 0.0) || !(mean_sq_norm > 0.0)) {
    throw DomainError("predicted_prelogit_variance: all arguments must be positive");
  }
  return static_cast<double>(d_z) * var_z * var_v * mean_sq_norm;
}

}  // namespace zslnorm
