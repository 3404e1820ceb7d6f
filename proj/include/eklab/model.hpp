#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eklab/window.hpp"

namespace eklab {

/// Parameters shaping the default window and smoothness cutoff.
///
/// The literal exponents 1/log_3 x and 1/log_4 x exceed 1 at every feasible
/// x, which would leave the sample space empty. The iterated logs are
/// therefore floored: z = x^(1/max(log_3 x, l3_floor)) and
/// L = x^(1/max(log_4 x, l4_floor)).
struct WindowParams {
  double l3_floor = 1.5;
  double l4_floor = 3.0;
  std::optional<double> y;  // override for (log x)^2
  std::optional<double> z;  // override for x^(1/max(log_3 x, l3_floor))
  std::optional<double> smoothness;  // override for L
};

[[nodiscard]] double effective_log3(double x, double l3_floor);
[[nodiscard]] double effective_log4(double x, double l4_floor);
[[nodiscard]] double default_y(double x);
[[nodiscard]] double default_z(double x, double l3_floor);
/// Smoothness cutoff L = x^(1/max(log_4 x, l4_floor)).
[[nodiscard]] double default_smoothness(double x, double l4_floor);

/// Builds the window of primes in (y, z] with compensated sums for mu and
/// sigma^2. Throws ParameterError (param "x", "y" or "z") on bad input.
[[nodiscard]] PrimeWindow build_window(double x, const WindowParams& params = {});

/// Window over an explicit ascending prime list; y and z are set to bracket it.
[[nodiscard]] PrimeWindow window_from_primes(std::vector<std::uint64_t> primes);

inline constexpr int kMaxMoment = 8;

/// Standardized moments E[Ytilde^j], j = 1..k_max, of Y = sum of independent
/// Bernoulli(1/p): cumulants add over p, then the cumulant-moment recursion
/// gives central moments, scaled by sigma^-j.
[[nodiscard]] std::vector<double> model_moments(const PrimeWindow& w, int k_max);

/// E[N^j] for j = 1..k_max: 0 for odd j, (j - 1)!! for even j.
[[nodiscard]] std::vector<double> normal_moments(int k_max);

/// Monte-Carlo draws of Y; element t is the number of primes p with
/// Y_p = 1 in trial t. Identical output for identical seeds.
[[nodiscard]] std::vector<std::uint32_t> sample_model(const PrimeWindow& w, std::uint64_t trials,
                                                      std::uint64_t seed);

struct MomentReport {
  int k_max = 0;
  std::vector<double> empirical;  // E[Xtilde^j], j = 1..k_max
  std::vector<double> model;      // E[Ytilde^j]
  std::vector<double> normal;     // E[N^j]
  std::vector<double> diffs;      // empirical - model
};

[[nodiscard]] MomentReport make_moment_report(std::vector<double> empirical, const PrimeWindow& w);

}  // namespace eklab
