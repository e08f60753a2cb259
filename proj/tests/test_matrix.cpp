#include <doctest.h>

#include "test_helpers.hpp"
#include "zslnorm/errors.hpp"
#include "zslnorm/init.hpp"
#include "zslnorm/matrix.hpp"
#include "zslnorm/rng.hpp"

using namespace zslnorm;

TEST_SUITE("matrix") {

TEST_CASE("multiply agrees with the naive triple-loop oracle") {
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    Matrix a = standard_normal_matrix(10, 10, rng);
    Matrix b = standard_normal_matrix(10, 10, rng);
    Matrix fast = matmul(a, b);
    Matrix slow = testing::naive_matmul(a, b);
    for (std::size_t i = 0; i < fast.size(); ++i) {
      const double denom = std::max(std::fabs(slow.flat()[i]), 1e-30);
      CHECK(std::fabs(fast.flat()[i] - slow.flat()[i]) / denom <= 1e-12);
    }
  }
}

TEST_CASE("transposed variants match explicit transposes") {
  Rng rng(3);
  Matrix a = standard_normal_matrix(4, 7, rng);
  Matrix b = standard_normal_matrix(5, 7, rng);
  CHECK(testing::max_abs_diff(matmul_transposed(a, b), matmul(a, b.transposed())) == 0.0);
  Matrix c = standard_normal_matrix(4, 6, rng);
  CHECK(testing::max_abs_diff(transposed_matmul(a, c), matmul(a.transposed(), c)) < 1e-12);
}

TEST_CASE("shape mismatches throw") {
  Matrix a(2, 3), b(2, 3);
  CHECK_THROWS_AS(matmul(a, b), DimensionError);
  CHECK_THROWS_AS(a += Matrix(3, 2), DimensionError);
}

TEST_CASE("initializer list and element access") {
  Matrix m{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 3.0);
  CHECK(m.row(1)[1] == 4.0);
  CHECK_THROWS_AS(Matrix({{1.0}, {2.0, 3.0}}), DimensionError);
}

TEST_CASE("finite check") {
  Matrix m(2, 2, 1.0);
  CHECK(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(m.all_finite());
  CHECK_THROWS_AS(m.ensure_finite("test"), DegenerateError);
}

}  // TEST_SUITE
