#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eklab {

/// Arithmetic function families f with f(mP) = P a(m) + b(m) for primes P not
/// dividing m.
enum class Family {
  S,            // s(n) = sigma(n) - n
  Beta,         // sum of distinct prime divisors
  BigA,         // sum of prime divisors with multiplicity
  Cototient,    // n - phi(n)
  NPlusTau,     // n + tau(n)
  NMinusTau,    // n - tau(n)
  NPlusOmega,   // n + omega(n)
  NMinusOmega,  // n - omega(n)
  PhiShift,     // phi(n) + shift
};

struct FnSpec {
  Family family = Family::S;
  std::int64_t shift = 0;  // PhiShift only
  std::uint64_t m0 = 0;    // b(m) != 0 for all m > max(1, m0)

  /// Builds a spec and fills m0 (for PhiShift, the largest m with phi(m) = shift).
  [[nodiscard]] static FnSpec make(Family family, std::int64_t shift = 0);

  /// Canonical name used on the command line: s, beta, A, cototient, n+tau,
  /// n-tau, n+omega, n-omega, phi+a (phi+<shift> with the shift spelled out).
  [[nodiscard]] std::string name() const;
};

/// Parses a family name as printed by FnSpec::name(). "phi+a" takes its
/// shift from `shift`; "phi+7" / "phi-3" carry it inline.
[[nodiscard]] FnSpec parse_fn(std::string_view name, std::int64_t shift = 0);

/// Every family, with PhiShift instantiated at `shift`.
[[nodiscard]] std::vector<FnSpec> all_families(std::int64_t shift = 2);

/// Arithmetic data of one integer n >= 2.
struct ArithPoint {
  std::uint64_t n = 0;
  std::uint64_t sigma = 0;
  std::uint64_t phi = 0;
  std::uint64_t tau = 0;
  unsigned omega = 0;
  std::uint64_t lpf = 0;        // largest prime factor
  bool lpf_sq_divides = false;  // lpf^2 | n
};

/// Sieve data for every n in [lo, hi).
struct SieveBlock {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> sigma;
  std::vector<std::uint64_t> phi;
  std::vector<std::uint64_t> tau;
  std::vector<std::uint8_t> omega_small;
  std::vector<std::uint64_t> lpf;
  std::vector<bool> lpf_sq_divides;

  [[nodiscard]] bool contains(std::uint64_t n) const noexcept { return n >= lo && n < hi; }
  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(hi - lo); }
  /// Throws DomainError when n is outside [lo, hi).
  [[nodiscard]] ArithPoint point(std::uint64_t n) const;
};

/// Segment length used by bulk runs: EKLAB_SEGMENT_SIZE if set, else 2^20.
[[nodiscard]] std::uint64_t segment_size();

/// Sieves [lo, hi). Requires 2 <= lo < hi and hi - lo <= max_len.
[[nodiscard]] SieveBlock sieve_block(std::uint64_t lo, std::uint64_t hi);
[[nodiscard]] SieveBlock sieve_block(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_len);

/// Arithmetic data of a single n, via factorization.
[[nodiscard]] ArithPoint arith_point(std::uint64_t n);

/// Sieve data for [2, hi) held as consecutive segments.
class BlockTable {
 public:
  BlockTable() = default;
  BlockTable(std::uint64_t hi, std::size_t threads);

  [[nodiscard]] std::uint64_t hi() const noexcept { return hi_; }
  [[nodiscard]] ArithPoint point(std::uint64_t n) const;

 private:
  std::uint64_t hi_ = 2;
  std::uint64_t seg_ = 1;
  std::vector<SieveBlock> blocks_;
};

/// s(n) = sigma(n) - n.
[[nodiscard]] std::uint64_t s_of(std::uint64_t n, const SieveBlock& block);
/// Sum of the distinct prime divisors of n.
[[nodiscard]] std::uint64_t beta_of(std::uint64_t n);
/// Sum of the prime divisors of n counted with multiplicity.
[[nodiscard]] std::uint64_t big_a_of(std::uint64_t n);

/// f(n) evaluated directly from n's arithmetic data.
[[nodiscard]] std::int64_t evaluate(const FnSpec& spec, const ArithPoint& pt);

struct LinearForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  /// Set for PhiShift when b(m) = 0 (only possible for m <= m0).
  bool b_vanishes = false;
};

/// Coefficients with f(mP) = P a(m) + b(m) for every prime P not dividing m.
/// Requires m >= 1.
[[nodiscard]] LinearForm linear_form(const FnSpec& spec, const ArithPoint& m);

}  // namespace eklab
