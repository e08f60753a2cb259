#include <doctest.h>

#include <cmath>

#include "zslnorm/errors.hpp"
#include "zslnorm/init.hpp"
#include "zslnorm/rng.hpp"

using namespace zslnorm;

TEST_SUITE("init") {

TEST_CASE("init_variance formulas") {
  CHECK(init_variance(InitKind::xavier_fan_in, 100, 7) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(init_variance(InitKind::xavier_fan_out, 7, 2048) ==
        doctest::Approx(1.0 / 2048.0).epsilon(1e-15));
  CHECK(init_variance(InitKind::kaiming_fan_in, 64, 7) ==
        doctest::Approx(2.0 / 64.0).epsilon(1e-15));
  CHECK(init_variance(InitKind::kaiming_fan_out, 7, 64) ==
        doctest::Approx(2.0 / 64.0).epsilon(1e-15));
  CHECK(init_variance(InitKind::cn_output, 2048, 2048, 2048) ==
        doctest::Approx(1.0 / 4194304.0).epsilon(1e-15));
  CHECK(init_variance(InitKind::linear_corrected, 85, 2048, 85) ==
        doctest::Approx(1.0 / 174080.0).epsilon(1e-15));
}

TEST_CASE("init_variance errors") {
  CHECK_THROWS_AS(init_variance(InitKind::xavier_fan_in, 0, 5), DimensionError);
  CHECK_THROWS_AS(init_variance(InitKind::cn_output, 5, 5), ConfigError);
  CHECK_THROWS_AS(init_variance(InitKind::linear_corrected, 5, 5), ConfigError);
}

TEST_CASE("sample_init empirical variance within 5% of target") {
  Rng rng(21);
  for (InitKind kind : {InitKind::xavier_fan_in, InitKind::kaiming_fan_out, InitKind::cn_output}) {
    for (InitDistribution dist : {InitDistribution::uniform, InitDistribution::normal}) {
      InitScheme scheme{kind, dist};
      const std::size_t rows = 512, cols = 512;
      Matrix m = sample_init(scheme, rows, cols, rng, 64);
      const double target = init_variance(kind, rows, cols, 64);
      double mean = 0.0;
      for (double v : m.flat()) mean += v;
      mean /= static_cast<double>(m.size());
      double var = 0.0;
      for (double v : m.flat()) var += (v - mean) * (v - mean);
      var /= static_cast<double>(m.size());
      CHECK(std::fabs(var - target) / target < 0.05);
    }
  }
}

TEST_CASE("uniform entries respect the sqrt(3 var) bound") {
  Rng rng(22);
  InitScheme scheme{InitKind::xavier_fan_in, InitDistribution::uniform};
  Matrix m = sample_init(scheme, 128, 64, rng);
  const double bound = std::sqrt(3.0 * init_variance(InitKind::xavier_fan_in, 128, 64));
  for (double v : m.flat()) CHECK(std::fabs(v) <= bound);
}

TEST_CASE("identical seeds give identical init matrices") {
  Rng a(5), b(5);
  InitScheme scheme{InitKind::xavier_fan_out, InitDistribution::normal};
  CHECK(sample_init(scheme, 16, 16, a) == sample_init(scheme, 16, 16, b));
}

TEST_CASE("name round-trips") {
  for (InitKind kind : {InitKind::xavier_fan_in, InitKind::xavier_fan_out,
                        InitKind::kaiming_fan_in, InitKind::kaiming_fan_out, InitKind::cn_output,
                        InitKind::linear_corrected}) {
    CHECK(init_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(init_kind_from_string("bogus"), ConfigError);
}

}  // TEST_SUITE
