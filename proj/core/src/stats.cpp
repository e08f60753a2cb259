#include "zslnorm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "zslnorm/errors.hpp"

namespace zslnorm {

StatSummary descriptive_stats(std::span<const double> v) {
  if (v.size() < 2) {
    throw InsufficientDataError("descriptive_stats: need at least 2 values");
  }
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  StatSummary s;
  s.mean = mean;
  s.variance = m2;
  s.n = v.size();
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  } else {
    s.degenerate = true;
  }
  return s;
}

NormalityResult normality_statistic(std::span<const double> v) {
  if (v.size() < 20) {
    throw InsufficientDataError("normality_statistic: need at least 20 values");
  }
  const StatSummary s = descriptive_stats(v);
  if (s.degenerate) {
    throw DegenerateError("normality_statistic: constant input");
  }
  const double n = static_cast<double>(v.size());
  const double g1 = s.skewness;
  const double b2 = s.excess_kurtosis + 3.0;  // plain (non-excess) kurtosis

  // Skewness transform, D'Agostino (1970).
  double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  if (y == 0.0) y = 1.0;
  const double z1 = delta * std::log(y / alpha + std::sqrt((y / alpha) * (y / alpha) + 1.0));

  // Kurtosis transform, Anscombe & Glynn (1983).
  const double eb2 = 3.0 * (n - 1.0) / (n + 1.0);
  const double vb2 = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (b2 - eb2) / std::sqrt(vb2);
  const double sqrt_b1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                         std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a = 6.0 + 8.0 / sqrt_b1 * (2.0 / sqrt_b1 + std::sqrt(1.0 + 4.0 / (sqrt_b1 * sqrt_b1)));
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  const double term2 = denom == 0.0
                           ? 0.0
                           : std::copysign(std::cbrt((1.0 - 2.0 / a) / std::fabs(denom)), denom);
  const double z2 = ((1.0 - 2.0 / (9.0 * a)) - term2) / std::sqrt(2.0 / (9.0 * a));

  NormalityResult r;
  r.k2 = z1 * z1 + z2 * z2;
  r.p_value = std::exp(-0.5 * r.k2);  // chi-squared(2) survival function
  return r;
}

CorrelationReport pairwise_abs_correlation(const Matrix& m) {
  if (m.rows() < 2 || m.cols() < 2) {
    throw InsufficientDataError("pairwise_abs_correlation: need >= 2 rows and columns");
  }
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();

  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) mean[j] += m(i, j);
  }
  for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);

  Matrix centered(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double d = m(i, j) - mean[j];
      centered(i, j) = d;
      sd[j] += d * d;
    }
  }

  CorrelationReport rep;
  std::vector<std::size_t> usable;
  for (std::size_t j = 0; j < p; ++j) {
    sd[j] = std::sqrt(sd[j]);
    if (sd[j] > 0.0) {
      usable.push_back(j);
    } else {
      rep.excluded_columns.push_back(j);
    }
  }
  if (usable.size() < 2) {
    throw InsufficientDataError("pairwise_abs_correlation: fewer than 2 non-constant columns");
  }

  const std::size_t u = usable.size();
  std::vector<double> acc(u, 0.0);
  for (std::size_t a = 0; a < u; ++a) {
    for (std::size_t b = a + 1; b < u; ++b) {
      double cov = 0.0;
      const std::size_t ja = usable[a], jb = usable[b];
      for (std::size_t i = 0; i < n; ++i) cov += centered(i, ja) * centered(i, jb);
      const double c = std::fabs(cov / (sd[ja] * sd[jb]));
      acc[a] += c;
      acc[b] += c;
    }
  }
  rep.mean_abs_corr.resize(u);
  for (std::size_t a = 0; a < u; ++a) {
    rep.mean_abs_corr[a] = acc[a] / static_cast<double>(u - 1);
  }
  return rep;
}

McResult mc_estimate(const std::function<double(Rng&)>& sampler, std::size_t trials,
                     const Rng& rng, int n_threads) {
  if (trials < 2) {
    throw InsufficientDataError("mc_estimate: need at least 2 trials");
  }
  constexpr std::size_t kChunk = 8192;
  const std::size_t n_chunks = (trials + kChunk - 1) / kChunk;

  std::vector<double> values(trials);
  auto run_chunk = [&](std::size_t c) {
    Rng sub = rng.substream(c);
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(lo + kChunk, trials);
    for (std::size_t i = lo; i < hi; ++i) values[i] = sampler(sub);
  };

  unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Two-pass moments over chunk-ordered values keep results independent of
  // the worker count.
  const double n = static_cast<double>(trials);
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : values) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;

  McResult r;
  r.mean = mean;
  r.variance = m2;
  const double var_of_var = (m4 - m2 * m2) / n;
  r.stderr_of_variance = var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
  return r;
}

double ks_distance_uniform(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::fabs(sorted[i] - lo));
    d = std::max(d, std::fabs(sorted[i] - hi));
  }
  return d;
}

}  // namespace zslnorm
