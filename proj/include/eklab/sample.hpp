#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eklab/arith.hpp"
#include "eklab/model.hpp"
#include "eklab/window.hpp"

namespace eklab {

enum class Population {
  OmegaSpace,  // composite n <= x with P+(n) > L and P+(n)^2 not dividing n
  AllN,        // every 1 < n <= x
};

struct SampleConfig {
  std::uint64_t x = 0;
  FnSpec spec;
  PrimeWindow window;
  double smoothness = 0.0;  // L
  Population population = Population::OmegaSpace;
  WindowParams params;

  /// Builds the window and L from x and the floors in `params`.
  [[nodiscard]] static SampleConfig make(std::uint64_t x, FnSpec spec, const WindowParams& params = {},
                                         Population population = Population::OmegaSpace);

  /// Largest integer m with m * (floor(L) + 1) <= x, i.e. the m-range of the
  /// n = mP decomposition.
  [[nodiscard]] std::uint64_t max_cofactor() const noexcept;
  /// Every prime P > L satisfies P > floor(L).
  [[nodiscard]] std::uint64_t smoothness_floor() const noexcept;
  [[nodiscard]] double log_log_x() const noexcept;
};

struct SampleRecord {
  std::uint64_t n = 0;
  bool in_omega = false;
  bool degenerate = false;  // f(n) = 0: never scored
  std::uint64_t m = 0;      // n / P+(n)
  std::uint64_t P = 0;      // P+(n)
  std::int64_t f_value = 0;
  unsigned omega_f = 0;
  unsigned omega_prime_f = 0;
  unsigned x_window = 0;  // y < p <= z
  unsigned x_small = 0;   // p <= y
  unsigned x_large = 0;   // p > z
  double score = 0.0;     // (omega_f - log log x) / sqrt(log log x)
};

/// Membership in the sample space for n with arithmetic data `pt`.
[[nodiscard]] bool in_sample_space(const ArithPoint& pt, const SampleConfig& cfg) noexcept;

/// Classifies n and evaluates f(n). For sample-space members the value is
/// recomputed from the linear form in (m, P); a mismatch throws
/// AssertionFailure. `m_data` must cover m = n / P+(n).
[[nodiscard]] SampleRecord classify(std::uint64_t n, const SampleConfig& cfg, const SieveBlock& block,
                                    const BlockTable& m_data);
/// Same, computing the arithmetic data of n and m by factorization.
[[nodiscard]] SampleRecord classify(std::uint64_t n, const SampleConfig& cfg);

/// Exact integer power sums sum X^j for j = 0..8 (j = 0 is the count).
struct PowerSums {
  std::array<unsigned __int128, kMaxMoment + 1> sums{};

  void add(unsigned v) noexcept;
  void merge(const PowerSums& o) noexcept;
  [[nodiscard]] std::uint64_t count() const noexcept { return static_cast<std::uint64_t>(sums[0]); }
  /// E[((X - mu) / sigma)^j] from the binomial expansion about mu.
  [[nodiscard]] double standardized_moment(int j, double mu, double sigma) const;

  friend bool operator==(const PowerSums&, const PowerSums&) = default;
};

/// Mergeable per-run tallies. All fields are integers, so merge order does
/// not matter.
struct SampleSummary {
  std::uint64_t records = 0;      // 1 < n <= x
  std::uint64_t omega_count = 0;  // #Omega
  std::uint64_t degenerate = 0;
  std::uint64_t scored = 0;                    // scored records in the population
  std::vector<std::uint64_t> omega_hist;       // population: count by omega(f(n))
  std::vector<std::uint64_t> omega_hist_space; // Omega: count by omega(f(n))
  std::vector<std::uint64_t> x_hist;           // Omega: count by X(n)
  PowerSums x_sums;                            // Omega: sums of X(n)^j
  unsigned __int128 x_small_sum = 0;           // Omega
  unsigned __int128 x_large_sum = 0;           // Omega
  unsigned __int128 omega_excess_sum = 0;      // population: sum of omega' - omega

  void add(const SampleRecord& r, Population population);
  void merge(const SampleSummary& o);

  friend bool operator==(const SampleSummary&, const SampleSummary&) = default;
};

using RecordSink = std::function<void(const SampleRecord&)>;

/// Streams every 1 < n <= x through classify, folding into a summary. The
/// sink, if any, sees records in increasing n for any thread count.
[[nodiscard]] SampleSummary run_sample(const SampleConfig& cfg, std::size_t threads = 0,
                                       const RecordSink& sink = {});

/// E[Xtilde^j], j = 1..k_max, over the sample-space records.
[[nodiscard]] std::vector<double> empirical_moments(std::span<const SampleRecord> records,
                                                    const PrimeWindow& w, int k_max);
[[nodiscard]] std::vector<double> empirical_moments(const PowerSums& sums, const PrimeWindow& w,
                                                    int k_max);

/// Mean over sample-space records of #{p <= y : p | f(n)}.
[[nodiscard]] double small_prime_expectation(std::span<const SampleRecord> records, double y);
[[nodiscard]] double small_prime_expectation(const SampleSummary& summary);

}  // namespace eklab
