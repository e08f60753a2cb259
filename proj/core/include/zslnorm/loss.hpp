#pragma once

#include <span>

#include "zslnorm/matrix.hpp"

namespace zslnorm {

struct LossResult {
  double value = 0.0;
  Matrix grad_logits;  // d value / d logits, same shape as the logits
};

/// Mean cross-entropy plus entropy_weight times the mean of sum_c p_c log p_c
/// (the negative entropy, so a positive weight pushes predictions toward
/// higher entropy). Returns the exact analytic gradient.
LossResult cross_entropy_loss(const Matrix& logits, std::span<const int> labels,
                              double entropy_weight);

}  // namespace zslnorm
