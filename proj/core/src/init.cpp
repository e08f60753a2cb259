#include "zslnorm/init.hpp"

#include <cmath>

#include "zslnorm/errors.hpp"

namespace zslnorm {

double init_variance(InitKind kind, std::size_t d_in, std::size_t d_out,
                     std::optional<std::size_t> d_extra) {
  if (d_in < 1 || d_out < 1) {
    throw DimensionError("init_variance: dimensions must be >= 1");
  }
  switch (kind) {
    case InitKind::xavier_fan_in:
      return 1.0 / static_cast<double>(d_in);
    case InitKind::xavier_fan_out:
      return 1.0 / static_cast<double>(d_out);
    case InitKind::kaiming_fan_in:
      return 2.0 / static_cast<double>(d_in);
    case InitKind::kaiming_fan_out:
      return 2.0 / static_cast<double>(d_out);
    case InitKind::cn_output:
      if (!d_extra || *d_extra < 1) {
        throw ConfigError("init_variance: cn_output needs the hidden width as context");
      }
      return 1.0 / (static_cast<double>(d_out) * static_cast<double>(*d_extra));
    case InitKind::linear_corrected:
      if (!d_extra || *d_extra < 1) {
        throw ConfigError("init_variance: linear_corrected needs the attribute width as context");
      }
      return 1.0 / (static_cast<double>(d_out) * static_cast<double>(*d_extra));
  }
  throw ConfigError("init_variance: unknown scheme");
}

Matrix sample_init(const InitScheme& scheme, std::size_t rows, std::size_t cols, Rng& rng,
                   std::optional<std::size_t> d_extra) {
  const double variance = init_variance(scheme.kind, rows, cols, d_extra);
  Matrix m(rows, cols);
  if (scheme.distribution == InitDistribution::uniform) {
    const double bound = std::sqrt(3.0 * variance);
    for (double& v : m.flat()) v = rng.next_uniform(-bound, bound);
  } else {
    const double sd = std::sqrt(variance);
    for (double& v : m.flat()) v = sd * rng.next_normal();
  }
  return m;
}

Matrix standard_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("standard_normal_matrix: dimensions must be >= 1");
  }
  Matrix m(rows, cols);
  for (double& v : m.flat()) v = rng.next_normal();
  return m;
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::xavier_fan_in: return "xavier_fan_in";
    case InitKind::xavier_fan_out: return "xavier_fan_out";
    case InitKind::kaiming_fan_in: return "kaiming_fan_in";
    case InitKind::kaiming_fan_out: return "kaiming_fan_out";
    case InitKind::cn_output: return "cn_output";
    case InitKind::linear_corrected: return "linear_corrected";
  }
  return "unknown";
}

std::string to_string(InitDistribution distribution) {
  return distribution == InitDistribution::uniform ? "uniform" : "normal";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "xavier_fan_in") return InitKind::xavier_fan_in;
  if (name == "xavier_fan_out") return InitKind::xavier_fan_out;
  if (name == "kaiming_fan_in") return InitKind::kaiming_fan_in;
  if (name == "kaiming_fan_out") return InitKind::kaiming_fan_out;
  if (name == "cn_output") return InitKind::cn_output;
  if (name == "linear_corrected") return InitKind::linear_corrected;
  throw ConfigError("unknown init scheme: " + name);
}

InitDistribution init_distribution_from_string(const std::string& name) {
  if (name == "uniform") return InitDistribution::uniform;
  if (name == "normal") return InitDistribution::normal;
  throw ConfigError("unknown init distribution: " + name);
}

}  // namespace zslnorm
