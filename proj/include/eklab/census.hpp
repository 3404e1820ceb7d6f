#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eklab/arith.hpp"
#include "eklab/sample.hpp"
#include "eklab/window.hpp"

namespace eklab {

/// How m relates to a squarefree modulus d through the linear form of f.
enum class DClass {
  Ideal,           // gcd(d, a(m) b(m)) = 1
  CompatNotIdeal,  // each p | d divides both a(m), b(m) or neither; some p divides both
  Incompatible,    // some p | d divides exactly one of a(m), b(m)
};

[[nodiscard]] const char* to_string(DClass c) noexcept;

/// d must be odd, squarefree and > 1 (DomainError otherwise).
[[nodiscard]] DClass classify_m(std::uint64_t d, const LinearForm& lf);
[[nodiscard]] DClass classify_m(std::uint64_t d, std::uint64_t m, const FnSpec& spec);

/// Both sides of the divisibility count for one d.
///
/// lhs counts n in the sample space with d | f(n). rhs sums, over cofactors
/// 1 < m < x/L, the primes P in (L_m, x/m] solving P a(m) + b(m) = 0 mod d,
/// where L_m = max(L, P+(m)). The two are equal by construction of the
/// decomposition n = mP; dcount throws AssertionFailure if they are not.
struct DCountReport {
  std::uint64_t d = 0;
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  std::uint64_t omega_count = 0;
  double expected = 0.0;     // #Omega / d
  double discrepancy = 0.0;  // |lhs / #Omega - 1 / d|
  // classification of the cofactors 1 < m < x/L
  std::uint64_t ideal = 0;
  std::uint64_t compat_not_ideal = 0;
  std::uint64_t incompatible = 0;
  double gcd_sum = 0.0;  // sum of (d, a(m)) / (m d) over compatible, non-ideal m
};

inline constexpr std::uint64_t kCensusMaxX = 10'000'000;

[[nodiscard]] std::vector<DCountReport> dcount(std::span<const std::uint64_t> ds, const SampleConfig& cfg,
                                               std::size_t threads = 0);
[[nodiscard]] DCountReport dcount(std::uint64_t d, const SampleConfig& cfg, std::size_t threads = 0);

/// Squarefree d <= cap with 1 <= omega(d) <= k and every prime factor in
/// the window, ascending.
struct DList {
  std::vector<std::uint64_t> ds;
  /// Set when some admissible d exceeds the cap and was left out.
  bool partial = false;
};
[[nodiscard]] DList enumerate_d(const PrimeWindow& w, int k, std::uint64_t cap);

/// Up to `limit` entries of `ds`, taking the smallest d of each omega(d) in
/// turn so small lists still mix single primes and products.
[[nodiscard]] std::vector<std::uint64_t> interleave_by_omega(std::span<const std::uint64_t> ds,
                                                             std::size_t limit);

inline constexpr std::uint64_t kMaxProgressionT = 100'000'000;

/// max over integers 2 <= t <= T and residues a coprime to q of
/// |pi(t; q, a) - pi(t) / phi(q)|.
[[nodiscard]] double progression_error(std::uint64_t T, std::uint64_t q);

struct HypothesisSums {
  double sum29 = 0.0;  // sum_{p <= y} sum_{1 < m <= x, p | a(m), p | b(m)} 1/m
  double sum30 = 0.0;  // sum_d sum_{compatible non-ideal m < x} (d, a(m)) / (m d)
  std::size_t d_count = 0;
  bool partial = false;  // d-list truncated by the cap
};

[[nodiscard]] HypothesisSums hypothesis_sums(const FnSpec& spec, std::uint64_t x, int k, const PrimeWindow& w,
                                             std::uint64_t cap = 1'000'000, std::size_t threads = 0);

}  // namespace eklab
