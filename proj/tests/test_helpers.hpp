#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "zslnorm/matrix.hpp"
#include "zslnorm/mlp.hpp"

namespace zslnorm::testing {

/// Independent triple-loop matrix product, kept deliberately naive.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

/// Central finite differences of a scalar function over parameter views.
/// Returns the worst relative error against the provided analytic gradient.
inline double max_gradient_rel_error(std::span<const ParamView> params,
                                     std::span<const ParamView> analytic,
                                     const std::function<double()>& loss_fn, double step = 1e-5) {
  double worst = 0.0;
  for (std::size_t g = 0; g < params.size(); ++g) {
    for (std::size_t i = 0; i < params[g].size; ++i) {
      double& p = params[g].data[i];
      const double saved = p;
      p = saved + step;
      const double up = loss_fn();
      p = saved - step;
      const double down = loss_fn();
      p = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = analytic[g].data[i];
      // The floor keeps finite-difference cancellation noise (~1e-11 here)
      // from dominating entries whose true gradient is zero.
      const double scale = std::max({std::fabs(numeric), std::fabs(exact), 1e-5});
      worst = std::max(worst, std::fabs(numeric - exact) / scale);
    }
  }
  return worst;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::fabs(a.flat()[i] - b.flat()[i]));
  }
  return worst;
}

}  // namespace zslnorm::testing
