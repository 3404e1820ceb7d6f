#pragma once

#include <cstdint>
#include <vector>

namespace eklab {

/// All primes p <= n, ascending (sieve of Eratosthenes over odd numbers).
[[nodiscard]] std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// All primes p with lo < p <= hi, ascending, via a segmented sieve.
[[nodiscard]] std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

/// Floor of the square root, exact for all 64-bit inputs.
[[nodiscard]] std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace eklab
