#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace zslnorm {

/// Inverse of the standard normal CDF, accurate to about 1e-16 relative
/// error (AS 241, PPND16). Requires p in (0, 1); out-of-range input throws
/// DomainError from the out-of-line handler.
double normal_quantile_slow_path(double p);

namespace detail {

// AS 241 rational approximations (PPND16). The central branch covers
// |p - 0.5| <= 0.425; the tails switch on r = sqrt(-log(min(p, 1-p))).
inline constexpr double kPpndA[8] = {
    3.3871328727963666080e+0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
inline constexpr double kPpndB[8] = {
    1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
    5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
inline constexpr double kPpndC[8] = {
    1.42343711074968357734e+0, 4.63033784615654529590e+0, 5.76949722146069140550e+0,
    3.64784832476320460504e+0, 1.27045825245236838258e+0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kPpndD[8] = {
    1.0,                       2.05319162663775882187e+0, 1.67638483018380384940e+0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
inline constexpr double kPpndE[8] = {
    6.65790464350110377720e+0, 5.46378491116411436990e+0, 1.78482653991729133580e+0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kPpndF[8] = {
    1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

inline double ppnd_rational(const double (&num)[8], const double (&den)[8], double r) {
  double n = num[7];
  double d = den[7];
  for (int i = 6; i >= 0; --i) {
    n = n * r + num[i];
    d = d * r + den[i];
  }
  return n / d;
}

}  // namespace detail

inline double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * detail::ppnd_rational(detail::kPpndA, detail::kPpndB, r);
  }
  return normal_quantile_slow_path(p);
}

/// Deterministic random source. The generator is a Mersenne Twister
/// (std::mt19937_64, fully specified by the C++ standard), uniforms take the
/// top 53 bits of each output word, and normal deviates are produced by the
/// AS 241 inverse normal CDF (Wichura's PPND16). Identical seeds therefore
/// yield identical streams on every platform, independent of the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform double in (lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  /// Standard normal deviate via inverse-CDF sampling.
  double next_normal() { return normal_quantile(next_uniform()); }

  /// Integer in [0, n), rejection-sampled so the map is exact.
  std::uint64_t next_below(std::uint64_t n);

  /// Child generator with a seed derived from (seed, index) by splitmix64.
  /// Substreams with distinct indices are independent for practical purposes
  /// and do not advance this generator's state.
  Rng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace zslnorm
