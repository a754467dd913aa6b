#pragma once

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "redmap/tensor_core.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;
inline const redmap::cplx kI{0.0, 1.0};

inline void check_close(const redmap::ComplexMatrix& a, const redmap::ComplexMatrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  CHECK(redmap::max_abs_diff(a, b) <= tol);
}

inline redmap::ComplexMatrix random_hermitian(std::size_t d, unsigned salt) {
  redmap::ComplexMatrix h(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = r; c < d; ++c) {
      const double x = std::sin(1.7 * (r + 1) + 2.3 * (c + 1) + salt);
      const double y = r == c ? 0.0 : std::cos(0.9 * (r + 2) * (c + 1) + 3.1 * salt);
      h(r, c) = {x, y};
      h(c, r) = {x, -y};
    }
  }
  return h;
}

}  // namespace testing
