#include "eklab/sample.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "eklab/error.hpp"
#include "eklab/factor.hpp"
#include "eklab/parallel.hpp"

namespace eklab {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

void bump(std::vector<u64>& hist, unsigned v, u64 w = 1) {
  if (hist.size() <= v) hist.resize(v + 1, 0);
  hist[v] += w;
}

void merge_hist(std::vector<u64>& into, const std::vector<u64>& from) {
  if (into.size() < from.size()) into.resize(from.size(), 0);
  for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

SampleRecord classify_point(const ArithPoint& pt, const SampleConfig& cfg,
                            const std::function<ArithPoint(u64)>& m_point) {
  SampleRecord r;
  r.n = pt.n;
  r.P = pt.lpf;
  r.m = pt.n / pt.lpf;
  r.in_omega = in_sample_space(pt, cfg);
  r.f_value = evaluate(cfg.spec, pt);
  if (r.in_omega) {
    const auto lf = linear_form(cfg.spec, m_point(r.m));
    const __int128 rebuilt = static_cast<__int128>(r.P) * lf.a + lf.b;
    if (rebuilt != r.f_value) {
      throw AssertionFailure("linear form mismatch at n = " + std::to_string(r.n) + " for f = " +
                             cfg.spec.name());
    }
  }
  if (r.f_value == 0) {
    r.degenerate = true;
    return r;
  }
  const u64 magnitude = r.f_value < 0 ? static_cast<u64>(-(r.f_value + 1)) + 1 : static_cast<u64>(r.f_value);
  const auto fact = factorize(magnitude);
  r.omega_f = fact.omega();
  r.omega_prime_f = fact.omega_prime();
  const auto split = split_by_window(fact, cfg.window);
  r.x_small = split.below;
  r.x_window = split.inside;
  r.x_large = split.above;
  const double ll = cfg.log_log_x();
  r.score = (static_cast<double>(r.omega_f) - ll) / std::sqrt(ll);
  return r;
}

}  // namespace

SampleConfig SampleConfig::make(u64 x, FnSpec spec, const WindowParams& params, Population population) {
  if (x < 16) throw ParameterError("x", "x must be at least 16");
  SampleConfig cfg;
  cfg.x = x;
  cfg.spec = spec;
  cfg.params = params;
  cfg.population = population;
  cfg.window = build_window(static_cast<double>(x), params);
  cfg.smoothness = params.smoothness.value_or(default_smoothness(static_cast<double>(x), params.l4_floor));
  if (!(cfg.smoothness > 2.0) || cfg.smoothness * cfg.smoothness > static_cast<double>(x)) {
    throw ParameterError("L", "smoothness cutoff must satisfy 2 < L <= sqrt(x)");
  }
  return cfg;
}

u64 SampleConfig::smoothness_floor() const noexcept { return static_cast<u64>(std::floor(smoothness)); }

u64 SampleConfig::max_cofactor() const noexcept { return x / (smoothness_floor() + 1); }

double SampleConfig::log_log_x() const noexcept { return std::log(std::log(static_cast<double>(x))); }

bool in_sample_space(const ArithPoint& pt, const SampleConfig& cfg) noexcept {
  if (pt.n > cfg.x || pt.lpf == pt.n) return false;  // prime, or out of range
  if (pt.lpf <= cfg.smoothness_floor() || pt.lpf_sq_divides) return false;
  if (cfg.spec.family == Family::PhiShift && pt.n / pt.lpf <= cfg.spec.m0) return false;
  return true;
}

SampleRecord classify(u64 n, const SampleConfig& cfg, const SieveBlock& block, const BlockTable& m_data) {
  if (n < 2 || n > cfg.x) throw DomainError("classify: n must satisfy 2 <= n <= x");
  return classify_point(block.point(n), cfg, [&](u64 m) { return m_data.point(m); });
}

SampleRecord classify(u64 n, const SampleConfig& cfg) {
  if (n < 2 || n > cfg.x) throw DomainError("classify: n must satisfy 2 <= n <= x");
  return classify_point(arith_point(n), cfg, [](u64 m) { return arith_point(m); });
}

void PowerSums::add(unsigned v) noexcept {
  u128 p = 1;
  for (auto& s : sums) {
    s += p;
    p *= v;
  }
}

void PowerSums::merge(const PowerSums& o) noexcept {
  for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += o.sums[j];
}

double PowerSums::standardized_moment(int j, double mu, double sigma) const {
  if (j < 0 || j > kMaxMoment) throw ParameterError("kmax", "moment order must lie in [0, 8]");
  if (count() == 0) throw DomainError("standardized_moment: empty sample");
  const long double n = static_cast<long double>(sums[0]);
  long double total = 0.0L;
  long double binom = 1.0L;  // C(j, i)
  for (int i = 0; i <= j; ++i) {
    const long double raw = static_cast<long double>(sums[static_cast<std::size_t>(i)]) / n;
    total += binom * std::pow(static_cast<long double>(-mu), j - i) * raw;
    binom = binom * (j - i) / (i + 1);
  }
  return static_cast<double>(total / std::pow(static_cast<long double>(sigma), j));
}

void SampleSummary::add(const SampleRecord& r, Population population) {
  ++records;
  if (r.in_omega) ++omega_count;
  if (r.degenerate) {
    ++degenerate;
    return;
  }
  if (population == Population::AllN || r.in_omega) {
    ++scored;
    bump(omega_hist, r.omega_f);
    omega_excess_sum += r.omega_prime_f - r.omega_f;
  }
  if (r.in_omega) {
    bump(omega_hist_space, r.omega_f);
    bump(x_hist, r.x_window);
    x_sums.add(r.x_window);
    x_small_sum += r.x_small;
    x_large_sum += r.x_large;
  }
}

void SampleSummary::merge(const SampleSummary& o) {
  records += o.records;
  omega_count += o.omega_count;
  degenerate += o.degenerate;
  scored += o.scored;
  merge_hist(omega_hist, o.omega_hist);
  merge_hist(omega_hist_space, o.omega_hist_space);
  merge_hist(x_hist, o.x_hist);
  x_sums.merge(o.x_sums);
  x_small_sum += o.x_small_sum;
  x_large_sum += o.x_large_sum;
  omega_excess_sum += o.omega_excess_sum;
}

SampleSummary run_sample(const SampleConfig& cfg, std::size_t threads, const RecordSink& sink) {
  const BlockTable m_data(cfg.max_cofactor() + 1, threads);
  const u64 seg = segment_size();
  const u64 first = 2, last = cfg.x;  // inclusive
  const u64 segments = (last - first) / seg + 1;

  struct Partial {
    SampleSummary summary;
    std::vector<SampleRecord> records;
  };
  SampleSummary total;
  ordered_parallel(
      segments, threads,
      [&](std::size_t k) {
        const u64 lo = first + k * seg;
        const u64 hi = std::min(last + 1, lo + seg);
        const auto block = sieve_block(lo, hi, seg);
        Partial part;
        if (sink) part.records.reserve(hi - lo);
        for (u64 n = lo; n < hi; ++n) {
          auto rec = classify(n, cfg, block, m_data);
          part.summary.add(rec, cfg.population);
          if (sink) part.records.push_back(rec);
        }
        return part;
      },
      [&](std::size_t, Partial&& part) {
        total.merge(part.summary);
        for (const auto& r : part.records) sink(r);
      });
  return total;
}

std::vector<double> empirical_moments(std::span<const SampleRecord> records, const PrimeWindow& w,
                                      int k_max) {
  PowerSums sums;
  for (const auto& r : records) {
    if (r.in_omega && !r.degenerate) sums.add(r.x_window);
  }
  return empirical_moments(sums, w, k_max);
}

std::vector<double> empirical_moments(const PowerSums& sums, const PrimeWindow& w, int k_max) {
  if (k_max < 1 || k_max > kMaxMoment) throw ParameterError("kmax", "k_max must lie in [1, 8]");
  if (sums.count() == 0) throw DomainError("empirical_moments: sample space is empty");
  const double sigma = std::sqrt(w.sigma2);
  std::vector<double> out(static_cast<std::size_t>(k_max));
  for (int j = 1; j <= k_max; ++j) out[static_cast<std::size_t>(j - 1)] = sums.standardized_moment(j, w.mu, sigma);
  return out;
}

double small_prime_expectation(std::span<const SampleRecord> records, double y) {
  u64 count = 0;
  u64 total = 0;
  for (const auto& r : records) {
    if (!r.in_omega || r.degenerate) continue;
    ++count;
    const u64 v = r.f_value < 0 ? static_cast<u64>(-(r.f_value + 1)) + 1 : static_cast<u64>(r.f_value);
    for (const auto& pp : factorize(v).factors()) {
      if (static_cast<double>(pp.prime) <= y) ++total;
    }
  }
  if (count == 0) throw DomainError("small_prime_expectation: sample space is empty");
  return static_cast<double>(total) / static_cast<double>(count);
}

double small_prime_expectation(const SampleSummary& summary) {
  if (summary.x_sums.count() == 0) throw DomainError("small_prime_expectation: sample space is empty");
  return static_cast<double>(summary.x_small_sum) / static_cast<double>(summary.x_sums.count());
}

}  // namespace eklab
