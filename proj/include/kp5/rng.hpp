#pragma once

#include <complex>
#include <cstdint>

namespace kp5 {

// Counter-based generator: the n-th draw of stream s under seed k is a pure
// function of (k, s, n).  Samples of an ensemble can therefore be generated
// in any order, serially or in parallel, with bit-identical results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Standard normal, Box-Muller on two uniform draws.
  double next_gaussian();
  // Independent standard normals in the real and imaginary parts.
  std::complex<double> next_complex_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kp5
