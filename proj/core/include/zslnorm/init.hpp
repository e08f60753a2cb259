#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"

namespace zslnorm {

enum class InitKind {
  xavier_fan_in,    // var = 1 / d_in
  xavier_fan_out,   // var = 1 / d_out
  kaiming_fan_in,   // var = 2 / d_in
  kaiming_fan_out,  // var = 2 / d_out
  cn_output,        // var = 1 / (d_out * d_extra), d_extra = hidden width
  linear_corrected, // var = 1 / (d_out * d_extra), d_extra = attribute width
};

enum class InitDistribution { uniform, normal };

struct InitScheme {
  InitKind kind = InitKind::xavier_fan_in;
  InitDistribution distribution = InitDistribution::uniform;
};

/// Target weight variance for a d_in x d_out layer. cn_output and
/// linear_corrected require the extra context dimension.
double init_variance(InitKind kind, std::size_t d_in, std::size_t d_out,
                     std::optional<std::size_t> d_extra = std::nullopt);

/// rows x cols matrix of i.i.d. zero-mean entries with the scheme's variance.
/// The uniform option draws from +/- sqrt(3 * variance). d_in = rows,
/// d_out = cols.
Matrix sample_init(const InitScheme& scheme, std::size_t rows, std::size_t cols, Rng& rng,
                   std::optional<std::size_t> d_extra = std::nullopt);

/// rows x cols matrix of i.i.d. standard normal entries, filled row-major.
Matrix standard_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng);

std::string to_string(InitKind kind);
std::string to_string(InitDistribution distribution);
InitKind init_kind_from_string(const std::string& name);
InitDistribution init_distribution_from_string(const std::string& name);

}  // namespace zslnorm
