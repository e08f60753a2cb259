#include "zslnorm/rng.hpp"

#include "zslnorm/errors.hpp"

namespace zslnorm {

double normal_quantile_slow_path(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile: p must lie in (0, 1)");
  }
  const double q = p - 0.5;
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0) {
    z = detail::ppnd_rational(detail::kPpndC, detail::kPpndD, r - 1.6);
  } else {
    z = detail::ppnd_rational(detail::kPpndE, detail::kPpndF, r - 5.0);
  }
  return q < 0.0 ? -z : z;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n == 0) {
    throw DomainError("next_below: n must be positive");
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ splitmix64(0x9E3779B97F4A7C15ULL * (index + 1))));
}

}  // namespace zslnorm
