#include "zslnorm/loss.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "zslnorm/errors.hpp"

namespace zslnorm {

LossResult cross_entropy_loss(const Matrix& logits, std::span<const int> labels,
                              double entropy_weight) {
  const std::size_t n = logits.rows();
  const std::size_t k = logits.cols();
  if (labels.size() != n) {
    throw DimensionError("cross_entropy_loss: label count != batch size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
      throw LabelError("cross_entropy_loss: label " + std::to_string(labels[i]) +
                       " outside [0, " + std::to_string(k) + ") at row " + std::to_string(i));
    }
  }

  LossResult result;
  result.grad_logits = Matrix(n, k);
  double total = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> log_p(k), p(k);

  for (std::size_t i = 0; i < n; ++i) {
    double row_max = logits(i, 0);
    for (std::size_t c = 1; c < k; ++c) row_max = std::max(row_max, logits(i, c));
    double sum_exp = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum_exp += std::exp(logits(i, c) - row_max);
    const double log_sum = row_max + std::log(sum_exp);

    double neg_entropy = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      log_p[c] = logits(i, c) - log_sum;
      p[c] = std::exp(log_p[c]);
      if (p[c] > 0.0) neg_entropy += p[c] * log_p[c];
    }
    const std::size_t y = static_cast<std::size_t>(labels[i]);
    total += -log_p[y] + entropy_weight * neg_entropy;

    for (std::size_t c = 0; c < k; ++c) {
      double g = p[c] - (c == y ? 1.0 : 0.0);
      if (entropy_weight != 0.0 && p[c] > 0.0) {
        g += entropy_weight * p[c] * (log_p[c] - neg_entropy);
      }
      result.grad_logits(i, c) = g * inv_n;
    }
  }
  result.value = total * inv_n;
  return result;
}

}  // namespace zslnorm
