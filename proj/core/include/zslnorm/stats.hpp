#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"

namespace zslnorm {

/// Population moments of a sample. When the variance is zero the skewness and
/// excess kurtosis are undefined; they are reported as 0 with `degenerate` set.
struct StatSummary {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::size_t n = 0;
  bool degenerate = false;
};

/// Population moments (divide by n). Requires at least 2 values.
StatSummary descriptive_stats(std::span<const double> v);

struct NormalityResult {
  double k2 = 0.0;
  double p_value = 0.0;
};

/// D'Agostino-Pearson omnibus normality test: K^2 = Z_skew^2 + Z_kurt^2 with
/// the D'Agostino (1970) skewness and Anscombe-Glynn (1983) kurtosis
/// transformations (the constant set used by scipy.stats.normaltest), p-value
/// from the chi-squared(2) tail. Requires at least 20 values.
NormalityResult normality_statistic(std::span<const double> v);

struct CorrelationReport {
  /// Mean over k != j of |Pearson corr(col j, col k)|, usable columns only,
  /// in original column order.
  std::vector<double> mean_abs_corr;
  /// Indices of zero-variance columns, excluded from the computation.
  std::vector<std::size_t> excluded_columns;
};

/// Requires >= 2 rows and >= 2 usable (non-constant) columns.
CorrelationReport pairwise_abs_correlation(const Matrix& m);

struct McResult {
  double mean = 0.0;
  double variance = 0.0;
  /// Standard error of the variance estimate via the fourth central moment,
  /// sqrt((m4 - m2^2) / n).
  double stderr_of_variance = 0.0;
};

/// Monte-Carlo estimate of a scalar statistic. Trials are split into
/// fixed-size chunks; chunk i draws from rng.substream(i), so the result is
/// byte-identical for any worker count. n_threads = 0 picks the hardware
/// concurrency.
McResult mc_estimate(const std::function<double(Rng&)>& sampler, std::size_t trials,
                     const Rng& rng, int n_threads = 0);

/// Kolmogorov-Smirnov distance between the empirical distribution of `sorted`
/// (must be ascending) and the uniform distribution on [0, 1].
double ks_distance_uniform(std::span<const double> sorted);

}  // namespace zslnorm
