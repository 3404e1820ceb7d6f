#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eklab/window.hpp"

namespace eklab {

/// Deterministic Miller-Rabin, exact for every 64-bit input.
[[nodiscard]] bool is_prime(std::uint64_t v) noexcept;

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a 64-bit value; factors sorted by prime.
class Factorization {
 public:
  Factorization() = default;
  Factorization(std::uint64_t value, std::vector<PrimePower> factors)
      : value_(value), factors_(std::move(factors)) {}

  [[nodiscard]] std::uint64_t value() const noexcept { return value_; }
  [[nodiscard]] const std::vector<PrimePower>& factors() const& noexcept {
    return factors_;
  }
  /// By value on temporaries, so `for (auto pp : factorize(v).factors())` is safe.
  [[nodiscard]] std::vector<PrimePower> factors() && noexcept { return std::move(factors_); }
  /// Number of distinct prime factors.
  [[nodiscard]] unsigned omega() const noexcept {
    return static_cast<unsigned>(factors_.size());
  }
  /// Number of prime factors counted with multiplicity.
  [[nodiscard]] unsigned omega_prime() const noexcept;
  /// Largest prime factor, 1 for value 1.
  [[nodiscard]] std::uint64_t largest_prime() const noexcept {
    return factors_.empty() ? 1 : factors_.back().prime;
  }

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

/// Trial division by primes below 1000, then Miller-Rabin and Brent's
/// variant of Pollard rho on the cofactor. Rho seeds are a function of the
/// value being split, so results never depend on call order or threads.
[[nodiscard]] Factorization factorize(std::uint64_t v);

/// Number of distinct prime divisors of v inside the window (y, z].
[[nodiscard]] unsigned omega_in_window(std::uint64_t v, const PrimeWindow& w);

/// Counts of distinct prime divisors of v split by the window: p <= y,
/// y < p <= z, and p > z.
struct WindowSplit {
  unsigned below = 0;
  unsigned inside = 0;
  unsigned above = 0;
};
[[nodiscard]] WindowSplit split_by_window(const Factorization& f,
                                          const PrimeWindow& w) noexcept;

}  // namespace eklab
