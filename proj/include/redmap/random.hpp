#pragma once

#include <cstdint>
#include <random>

#include "redmap/tensor_core.hpp"

namespace redmap {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic generator for sample `stream` under `seed`. Streams are
/// independent of one another and of evaluation order, so sample i of a
/// Monte Carlo run is the same no matter which thread draws it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace redmap
