#pragma once

#include <cstdint>
#include <vector>

namespace eklab {

/// The prime window: all primes p with y < p <= z, and the mean and
/// variance of the Bernoulli model sum over it.
struct PrimeWindow {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::vector<std::uint64_t> primes;  // ascending
  double mu = 0.0;                    // sum of 1/p
  double sigma2 = 0.0;                // sum of (1/p)(1 - 1/p)

  [[nodiscard]] bool contains(std::uint64_t p) const noexcept {
    return static_cast<double>(p) > y && static_cast<double>(p) <= z;
  }
  [[nodiscard]] std::size_t size() const noexcept { return primes.size(); }
};

}  // namespace eklab
