#pragma once

#include <cstddef>
#include <vector>

#include "zslnorm/matrix.hpp"

namespace zslnorm {

enum class Mode { train, eval };

/// Divide every row by its L2 norm. Throws DegenerateError naming the first
/// zero row.
Matrix attribute_normalize(const Matrix& a);

/// Column-wise standardization to zero mean and unit population variance.
/// Constant columns map to zeros; their count is reported through
/// degenerate_count when provided.
Matrix attribute_standardize(const Matrix& a, std::size_t* degenerate_count = nullptr);

/// Divide every row by the batch mean of squared row norms, exactly as
/// written (no square root). use_root switches to dividing by the root of
/// that mean instead.
Matrix dynamic_normalize(const Matrix& h, bool use_root = false);

/// Class-wise standardization layer: per hidden dimension, subtract the mean
/// and divide by the population std over the class axis. Running statistics
/// are exponential moving averages updated in train mode and used verbatim in
/// eval mode. The divisor is max(std, epsilon), so non-degenerate dimensions
/// are standardized exactly and zero-spread dimensions map to zero.
class ClassStandardizer {
 public:
  ClassStandardizer() = default;
  ClassStandardizer(std::size_t dim, double momentum = 0.1, double epsilon = 1e-5);

  struct Cache {
    Matrix input;
    Matrix output;
    std::vector<double> mean;
    std::vector<double> std;      // population std per dimension
    std::vector<double> divisor;  // max(std, epsilon)
    std::size_t degenerate_dims = 0;
    bool batch_stats = true;  // false when the forward used running statistics
  };

  /// K x dim -> K x dim. Train mode requires K >= 2 and updates the running
  /// statistics; eval mode accepts K >= 1 and leaves them untouched.
  Matrix forward(const Matrix& h, Mode mode, Cache* cache = nullptr);

  /// Gradient of the train-mode forward w.r.t. its input (batch-norm style
  /// chain rule through the batch statistics).
  Matrix backward(const Cache& cache, const Matrix& grad_output) const;

  std::size_t dim() const { return running_mean_.size(); }
  double momentum() const { return momentum_; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& running_mean() const { return running_mean_; }
  const std::vector<double>& running_var() const { return running_var_; }
  std::vector<double>& mutable_running_mean() { return running_mean_; }
  std::vector<double>& mutable_running_var() { return running_var_; }

 private:
  std::vector<double> running_mean_;
  std::vector<double> running_var_;
  double momentum_ = 0.1;
  double epsilon_ = 1e-5;
};

}  // namespace zslnorm
