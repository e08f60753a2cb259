#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "zslnorm/errors.hpp"
#include "zslnorm/init.hpp"
#include "zslnorm/logits.hpp"
#include "zslnorm/rng.hpp"

using namespace zslnorm;

TEST_SUITE("logits") {

TEST_CASE("aligned vectors give gamma^2") {
  Matrix z{{1.0, 2.0, 2.0}};
  Matrix w{{2.0, 4.0, 4.0}};
  LogitConfig cfg{LogitMode::normalize_scale, 5.0, 1.0};
  Matrix y = compute_logits(z, w, cfg);
  CHECK(y(0, 0) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("orthogonal vectors give zero") {
  Matrix z{{1.0, 0.0}};
  Matrix w{{0.0, 3.0}};
  LogitConfig cfg{LogitMode::normalize_scale, 7.0, 1.0};
  CHECK(std::fabs(compute_logits(z, w, cfg)(0, 0)) < 1e-15);
}

TEST_CASE("random unit directions in high dimension concentrate near zero") {
  Rng rng(12);
  LogitConfig cfg{LogitMode::normalize_scale, 1.0, 1.0};
  std::size_t within = 0;
  const std::size_t n = 1000;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix z = standard_normal_matrix(1, 2048, rng);
    Matrix w = standard_normal_matrix(1, 2048, rng);
    if (std::fabs(compute_logits(z, w, cfg)(0, 0)) < 0.1) ++within;
  }
  CHECK(within >= 990);
}

TEST_CASE("cosine logits are invariant to positive row rescaling") {
  Rng rng(13);
  Matrix z = standard_normal_matrix(4, 16, rng);
  Matrix w = standard_normal_matrix(3, 16, rng);
  LogitConfig cfg{LogitMode::normalize_scale, 5.0, 1.0};
  Matrix base = compute_logits(z, w, cfg);
  Matrix z2 = z;
  for (double& v : z2.row(2)) v *= 13.0;
  Matrix w2 = w;
  for (double& v : w2.row(1)) v *= 0.01;
  Matrix scaled = compute_logits(z2, w2, cfg);
  CHECK(testing::max_abs_diff(base, scaled) < 1e-10);
}

TEST_CASE("dot mode is the plain product") {
  Rng rng(14);
  Matrix z = standard_normal_matrix(4, 6, rng);
  Matrix w = standard_normal_matrix(3, 6, rng);
  LogitConfig cfg{LogitMode::dot, 5.0, 1.0};
  CHECK(testing::max_abs_diff(compute_logits(z, w, cfg),
                              testing::naive_matmul(z, w.transposed())) < 1e-12);
}

TEST_CASE("zero rows are rejected in cosine mode") {
  Matrix z{{0.0, 0.0}};
  Matrix w{{1.0, 0.0}};
  LogitConfig cfg{LogitMode::normalize_scale, 5.0, 1.0};
  CHECK_THROWS_AS(compute_logits(z, w, cfg), DegenerateError);
  LogitConfig dot{LogitMode::dot, 5.0, 1.0};
  CHECK_NOTHROW(compute_logits(z, w, dot));
}

TEST_CASE("cosine backward matches finite differences") {
  Rng rng(15);
  const std::size_t n = 3, k = 4, d = 5;
  Matrix z = standard_normal_matrix(n, d, rng);
  Matrix w = standard_normal_matrix(k, d, rng);
  Matrix upstream = standard_normal_matrix(n, k, rng);
  LogitConfig cfg{LogitMode::normalize_scale, 3.0, 1.0};

  LogitsCache cache;
  compute_logits(z, w, cfg, &cache);
  LogitsGradients g = compute_logits_backward(upstream, z, w, cfg, cache);

  auto loss_of = [&](const Matrix& zz, const Matrix& ww) {
    Matrix y = compute_logits(zz, ww, cfg);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y.flat()[i] * upstream.flat()[i];
    return s;
  };
  const double step = 1e-6;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      Matrix up = w, down = w;
      up(r, c) += step;
      down(r, c) -= step;
      const double numeric = (loss_of(z, up) - loss_of(z, down)) / (2.0 * step);
      CHECK(std::fabs(numeric - g.d_w(r, c)) < 1e-6 * std::max(1.0, std::fabs(numeric)));
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      Matrix up = z, down = z;
      up(r, c) += step;
      down(r, c) -= step;
      const double numeric = (loss_of(up, w) - loss_of(down, w)) / (2.0 * step);
      CHECK(std::fabs(numeric - g.d_z(r, c)) < 1e-6 * std::max(1.0, std::fabs(numeric)));
    }
  }
}

TEST_CASE("apply_seen_scale") {
  Matrix logits{{1.0, 1.0, 1.0}};
  std::vector<bool> mask{true, false, true};
  SUBCASE("identity at s = 1") {
    CHECK(testing::max_abs_diff(apply_seen_scale(logits, mask, 1.0), logits) == 0.0);
  }
  SUBCASE("scales only seen columns") {
    Matrix out = apply_seen_scale(logits, mask, 0.95);
    CHECK(out(0, 0) == doctest::Approx(0.95));
    CHECK(out(0, 1) == doctest::Approx(1.0));
    CHECK(out(0, 2) == doctest::Approx(0.95));
  }
  SUBCASE("range check") {
    CHECK_THROWS_AS(apply_seen_scale(logits, mask, 0.0), ConfigError);
    CHECK_THROWS_AS(apply_seen_scale(logits, mask, 1.5), ConfigError);
  }
  SUBCASE("argmax flips exactly when s crosses the ratio") {
    // 3 classes: columns 0,1 seen, column 2 unseen.
    Matrix row{{2.0, 1.0, 1.9}};
    std::vector<bool> m{true, true, false};
    for (double s : {1.0, 0.96, 0.951, 0.949, 0.9, 0.5, 0.01}) {
      Matrix out = apply_seen_scale(row, m, s);
      std::size_t best = 0;
      for (std::size_t c = 1; c < 3; ++c) {
        if (out(0, c) > out(0, best)) best = c;
      }
      // Brute-force oracle over the scaled row.
      const double seen_best = std::max(2.0 * s, 1.0 * s);
      const std::size_t expected = seen_best >= 1.9 ? 0 : 2;
      CHECK(best == expected);
    }
  }
}

TEST_CASE("predicted_ns_variance") {
  CHECK(predicted_ns_variance(1.0, 4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(predicted_ns_variance(5.0, 2048) == doctest::Approx(0.30577).epsilon(1e-5 / 0.30577));
  // 6.78^4 * 2048 / 2046^2; the scale hitting exactly unit variance at
  // d_z = 2048 is 6.723886.
  CHECK(predicted_ns_variance(6.78, 2048) == doctest::Approx(1.0338022404182972).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_ns_variance(1.0, 2), DomainError);
  SUBCASE("monotone in d and gamma") {
    double prev = predicted_ns_variance(2.0, 3);
    for (std::size_t d = 4; d < 200; ++d) {
      const double cur = predicted_ns_variance(2.0, d);
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(predicted_ns_variance(2.5, 64) > predicted_ns_variance(2.0, 64));
  }
}

TEST_CASE("optimal_gamma") {
  // The closed form gives 6.7239 for unit variance at d_z = 2048.
  CHECK(optimal_gamma(1.0, 2048) == doctest::Approx(6.7238857).epsilon(1e-6));
  CHECK(optimal_gamma(16.0, 4) == doctest::Approx(2.0).epsilon(1e-12));
  SUBCASE("round trip inverse") {
    Rng rng(16);
    for (int i = 0; i < 100; ++i) {
      const double nu = std::exp(rng.next_uniform(-2.0, 2.0));
      const std::size_t d = 3 + static_cast<std::size_t>(rng.next_below(8190));
      const double g = optimal_gamma(nu, d);
      CHECK(std::fabs(predicted_ns_variance(g, d) - nu) <= 1e-12 * std::max(1.0, nu));
    }
  }
  CHECK_THROWS_AS(optimal_gamma(0.0, 2048), DomainError);
  CHECK_THROWS_AS(optimal_gamma(1.0, 2), DomainError);
}

TEST_CASE("predicted_prelogit_variance") {
  // Unit-norm attributes with fan-out init preserve the feature variance.
  CHECK(predicted_prelogit_variance(2048, 0.7, 1.0 / 2048.0, 1.0) ==
        doctest::Approx(0.7).epsilon(1e-12));
  // Class-normalized hidden layer: var 1/(d_z d_h) with mean norm d_h.
  CHECK(predicted_prelogit_variance(2048, 0.7, 1.0 / (2048.0 * 64.0), 64.0) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK(predicted_prelogit_variance(16, 1.0, 0.25, 2.0) ==
        doctest::Approx(2.0 * predicted_prelogit_variance(16, 1.0, 0.25, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_prelogit_variance(16, -1.0, 0.25, 1.0), DomainError);
}

}  // TEST_SUITE
