#include "zslnorm/normalization.hpp"

#include <cmath>
#include <string>

#include "zslnorm/errors.hpp"

namespace zslnorm {

Matrix attribute_normalize(const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double norm = l2_norm(a.row(i));
    if (norm == 0.0) {
      throw DegenerateError("attribute_normalize: zero attribute row for class " +
                            std::to_string(i));
    }
    for (double& v : out.row(i)) v /= norm;
  }
  return out;
}

Matrix attribute_standardize(const Matrix& a, std::size_t* degenerate_count) {
  if (a.rows() < 2) {
    throw InsufficientDataError("attribute_standardize: need at least 2 rows");
  }
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  constexpr double kEpsilon = 1e-5;

  Matrix out(n, p);
  std::size_t degenerate = 0;
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd < kEpsilon) ++degenerate;
    const double divisor = std::max(sd, kEpsilon);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = (a(i, j) - mean) / divisor;
  }
  if (degenerate_count != nullptr) *degenerate_count = degenerate;
  return out;
}

Matrix dynamic_normalize(const Matrix& h, bool use_root) {
  if (h.rows() < 1) {
    throw InsufficientDataError("dynamic_normalize: empty batch");
  }
  double mean_sq = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    mean_sq += dot(h.row(i), h.row(i));
  }
  mean_sq /= static_cast<double>(h.rows());
  if (mean_sq == 0.0) {
    throw DegenerateError("dynamic_normalize: batch mean squared norm is zero");
  }
  const double divisor = use_root ? std::sqrt(mean_sq) : mean_sq;
  Matrix out = h;
  out *= 1.0 / divisor;
  return out;
}

ClassStandardizer::ClassStandardizer(std::size_t dim, double momentum, double epsilon)
    : running_mean_(dim, 0.0), running_var_(dim, 1.0), momentum_(momentum), epsilon_(epsilon) {
  if (momentum <= 0.0 || momentum > 1.0) {
    throw ConfigError("ClassStandardizer: momentum must lie in (0, 1]");
  }
  if (epsilon <= 0.0) {
    throw ConfigError("ClassStandardizer: epsilon must be positive");
  }
}

Matrix ClassStandardizer::forward(const Matrix& h, Mode mode, Cache* cache) {
  if (h.cols() != dim()) {
    throw DimensionError("ClassStandardizer: input width " + std::to_string(h.cols()) +
                         " != layer width " + std::to_string(dim()));
  }
  const std::size_t k = h.rows();
  if (mode == Mode::train && k < 2) {
    throw InsufficientDataError("ClassStandardizer: train mode needs at least 2 classes");
  }
  if (k < 1) {
    throw InsufficientDataError("ClassStandardizer: empty input");
  }

  const std::size_t d = dim();
  std::vector<double> mean(d), sd(d), divisor(d);
  if (mode == Mode::train) {
    for (std::size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (std::size_t c = 0; c < k; ++c) m += h(c, j);
      m /= static_cast<double>(k);
      double var = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double diff = h(c, j) - m;
        var += diff * diff;
      }
      var /= static_cast<double>(k);
      mean[j] = m;
      sd[j] = std::sqrt(var);
      running_mean_[j] = (1.0 - momentum_) * running_mean_[j] + momentum_ * m;
      running_var_[j] = (1.0 - momentum_) * running_var_[j] + momentum_ * var;
    }
  } else {
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] = running_mean_[j];
      sd[j] = std::sqrt(std::max(running_var_[j], 0.0));
    }
  }

  std::size_t degenerate = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (sd[j] < epsilon_) ++degenerate;
    divisor[j] = std::max(sd[j], epsilon_);
  }

  Matrix out(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      out(c, j) = (h(c, j) - mean[j]) / divisor[j];
    }
  }

  if (cache != nullptr) {
    cache->input = h;
    cache->output = out;
    cache->mean = std::move(mean);
    cache->std = std::move(sd);
    cache->divisor = std::move(divisor);
    cache->degenerate_dims = degenerate;
    cache->batch_stats = mode == Mode::train;
  }
  return out;
}

Matrix ClassStandardizer::backward(const Cache& cache, const Matrix& grad_output) const {
  const std::size_t k = cache.input.rows();
  const std::size_t d = cache.input.cols();
  if (grad_output.rows() != k || grad_output.cols() != d) {
    throw DimensionError("ClassStandardizer::backward: gradient shape mismatch");
  }
  Matrix grad_input(k, d);
  const double kn = static_cast<double>(k);
  if (!cache.batch_stats) {
    // Running statistics are constants w.r.t. the input.
    for (std::size_t j = 0; j < d; ++j) {
      const double inv = 1.0 / cache.divisor[j];
      for (std::size_t c = 0; c < k; ++c) grad_input(c, j) = inv * grad_output(c, j);
    }
    return grad_input;
  }
  for (std::size_t j = 0; j < d; ++j) {
    double g_mean = 0.0;
    double gx_mean = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      g_mean += grad_output(c, j);
      gx_mean += grad_output(c, j) * cache.output(c, j);
    }
    g_mean /= kn;
    gx_mean /= kn;
    if (cache.std[j] >= epsilon_) {
      // d/dx of (x - mu)/sigma with mu, sigma functions of the batch.
      const double inv = 1.0 / cache.std[j];
      for (std::size_t c = 0; c < k; ++c) {
        grad_input(c, j) =
            inv * (grad_output(c, j) - g_mean - cache.output(c, j) * gx_mean);
      }
    } else {
      // Degenerate dimension: divisor is the constant epsilon, only the
      // centering participates.
      const double inv = 1.0 / epsilon_;
      for (std::size_t c = 0; c < k; ++c) {
        grad_input(c, j) = inv * (grad_output(c, j) - g_mean);
      }
    }
  }
  return grad_input;
}

}  // namespace zslnorm
