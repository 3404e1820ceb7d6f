#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace eklab {

/// Standard normal distribution function.
[[nodiscard]] double normal_cdf(double u) noexcept;

/// Empirical distribution function of a finite sample. Stored as distinct
/// sorted values with cumulative counts, so a sample with heavy ties (such as
/// standardized integer counts) stays small.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> scores);
  /// Weighted construction: value[i] occurs weight[i] times.
  Ecdf(std::span<const double> values, std::span<const std::uint64_t> weights);

  [[nodiscard]] std::uint64_t n() const noexcept { return n_; }
  /// Fraction of the sample <= u.
  [[nodiscard]] double operator()(double u) const noexcept;
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<std::uint64_t>& cumulative() const noexcept { return cumulative_; }

 private:
  void build(std::vector<std::pair<double, std::uint64_t>> pairs);

  std::vector<double> values_;              // distinct, ascending
  std::vector<std::uint64_t> cumulative_;   // #{scores <= values_[i]}
  std::uint64_t n_ = 0;
};

/// sup_u |F_n(u) - Phi(u)|, checked on both sides of every jump.
[[nodiscard]] double ks_distance(const Ecdf& e) noexcept;

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> edges;             // bins + 1 edges
  std::vector<std::uint64_t> counts;     // in-range bins
  std::vector<double> normal_mass;       // Phi(edge[i+1]) - Phi(edge[i])
  std::uint64_t underflow = 0;           // scores < lo
  std::uint64_t overflow = 0;            // scores >= hi
  double underflow_mass = 0.0;           // Phi(lo)
  double overflow_mass = 0.0;            // 1 - Phi(hi)

  [[nodiscard]] std::uint64_t total() const noexcept;
};

/// Uniform bins over [lo, hi); the last bin is closed on the right only at
/// hi itself when hi is a score, which falls in the overflow bin.
[[nodiscard]] Histogram histogram(std::span<const double> scores, int bins, double lo, double hi);
[[nodiscard]] Histogram histogram(std::span<const double> scores, std::span<const std::uint64_t> weights,
                                  int bins, double lo, double hi);

}  // namespace eklab
