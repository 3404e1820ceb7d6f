#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "eklab/error.hpp"
#include "eklab/sample.hpp"
#include "oracles.hpp"

using namespace eklab;

namespace {

SampleConfig small_config(std::uint64_t x, Population pop = Population::OmegaSpace,
                          Family fam = Family::S) {
  return SampleConfig::make(x, FnSpec::make(fam, fam == Family::PhiShift ? 4 : 0),
                            {.y = 3.0, .z = 50.0}, pop);
}

std::vector<SampleRecord> collect(const SampleConfig& cfg, std::size_t threads, SampleSummary* out = nullptr) {
  std::vector<SampleRecord> recs;
  auto summary = run_sample(cfg, threads, [&](const SampleRecord& r) { recs.push_back(r); });
  if (out) *out = summary;
  return recs;
}

}  // namespace

TEST_CASE("classify examples at x = 100, L = 4") {
  auto cfg = SampleConfig::make(100, FnSpec::make(Family::S), {.y = 3.0, .z = 50.0, .smoothness = 4.0});
  const auto r20 = classify(20, cfg);
  CHECK(r20.in_omega);
  CHECK(r20.m == 4);
  CHECK(r20.P == 5);
  CHECK(r20.f_value == 22);
  CHECK(r20.omega_f == 2);

  const auto r17 = classify(17, cfg);
  CHECK_FALSE(r17.in_omega);
  CHECK(r17.f_value == 1);
  CHECK(r17.omega_f == 0);

  const auto r18 = classify(18, cfg);
  CHECK_FALSE(r18.in_omega);
  CHECK(r18.P == 3);

  CHECK_THROWS_AS((void)classify(101, cfg), DomainError);
  CHECK_THROWS_AS((void)SampleConfig::make(100, FnSpec::make(Family::S), {.y = 3.0, .z = 50.0, .smoothness = 11.0}),
                  ParameterError);
}

TEST_CASE("sample space count matches brute force at x = 100") {
  const auto cfg = small_config(100);
  CHECK(cfg.smoothness == doctest::Approx(std::cbrt(100.0)));
  std::uint64_t brute = 0;
  for (std::uint64_t n = 2; n <= 100; ++n) {
    const auto p = oracle::lpf(n);
    brute += p != n && static_cast<double>(p) > cfg.smoothness && n % (p * p) != 0;
  }
  SampleSummary s;
  const auto recs = collect(cfg, 1, &s);
  CHECK(recs.size() == 99);
  CHECK(s.records == 99);
  CHECK(s.omega_count == brute);
}

TEST_CASE("AllN population scores every n") {
  SampleSummary s;
  const auto recs = collect(small_config(100, Population::AllN), 1, &s);
  CHECK(recs.size() == 99);
  CHECK(s.scored == 99);
  std::uint64_t hist_total = 0;
  for (auto c : s.omega_hist) hist_total += c;
  CHECK(hist_total == 99);
}

TEST_CASE("record invariants across families at x = 20000") {
  for (const auto& spec : all_families(4)) {
    CAPTURE(spec.name());
    const auto cfg = SampleConfig::make(20000, spec, {.y = 20.0, .z = 300.0}, Population::AllN);
    const auto recs = collect(cfg, 2);
    REQUIRE(recs.size() == 19999);
    for (const auto& r : recs) {
      REQUIRE(r.n >= 2);
      if (r.degenerate) {
        REQUIRE(r.f_value == 0);
        continue;
      }
      REQUIRE(r.x_small + r.x_window + r.x_large == r.omega_f);
      REQUIRE(r.omega_prime_f >= r.omega_f);
      if (r.in_omega) {
        REQUIRE(r.m > 1);
        REQUIRE(r.m * r.P == r.n);
        REQUIRE(oracle::is_prime(r.P));
        REQUIRE(static_cast<double>(r.P) > cfg.smoothness);
        REQUIRE(r.m % r.P != 0);
      }
      if (r.n < 3000) REQUIRE(r.omega_f == oracle::omega(static_cast<std::uint64_t>(std::llabs(r.f_value))));
    }
  }
}

TEST_CASE("phi+a excludes small cofactors from the sample space") {
  const auto spec = FnSpec::make(Family::PhiShift, 4);
  const auto cfg = SampleConfig::make(5000, spec, {.y = 20.0, .z = 300.0});
  for (const auto& r : collect(cfg, 1)) {
    if (r.in_omega) REQUIRE(r.m > spec.m0);
  }
}

TEST_CASE("run_sample is independent of thread count and segment size") {
  const auto cfg = SampleConfig::make(60000, FnSpec::make(Family::S), {.y = 11.0, .z = 400.0});
  SampleSummary one, many;
  ::setenv("EKLAB_SEGMENT_SIZE", "7001", 1);
  const auto a = collect(cfg, 1, &one);
  const auto b = collect(cfg, 5, &many);
  ::unsetenv("EKLAB_SEGMENT_SIZE");
  CHECK(one == many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].n == b[i].n);
    REQUIRE(a[i].f_value == b[i].f_value);
    REQUIRE(a[i].x_window == b[i].x_window);
  }
  const auto whole = run_sample(cfg, 3);
  CHECK(whole == one);
}

TEST_CASE("power sums") {
  PowerSums ps;
  for (int i = 0; i < 10; ++i) ps.add(3);
  const double mu = 1.25, sigma = 0.8;
  CHECK(ps.standardized_moment(0, mu, sigma) == 1.0);
  CHECK(ps.standardized_moment(2, mu, sigma) == doctest::Approx(std::pow((3 - mu) / sigma, 2)).epsilon(1e-12));
  CHECK(ps.standardized_moment(5, mu, sigma) == doctest::Approx(std::pow((3 - mu) / sigma, 5)).epsilon(1e-12));
  CHECK_THROWS_AS((void)PowerSums{}.standardized_moment(1, 0.0, 1.0), DomainError);
}

TEST_CASE("empirical moments match a naive recomputation at x = 10^5") {
  const auto cfg = SampleConfig::make(100000, FnSpec::make(Family::S), {.y = 10.0, .z = 100.0});
  REQUIRE(cfg.window.primes.size() == 21);
  SampleSummary s;
  const auto recs = collect(cfg, 2, &s);
  // naive power sums over the sample space
  std::array<unsigned __int128, 9> naive{};
  for (const auto& r : recs) {
    if (!r.in_omega) continue;
    unsigned x = 0;
    for (auto [p, e] : oracle::trial_factor(static_cast<std::uint64_t>(r.f_value))) x += p > 10 && p < 100;
    unsigned __int128 pw = 1;
    for (auto& v : naive) {
      v += pw;
      pw *= x;
    }
  }
  CHECK(naive == s.x_sums.sums);
  const auto fast = empirical_moments(s.x_sums, cfg.window, 6);
  const auto from_records = empirical_moments(recs, cfg.window, 6);
  for (int j = 0; j < 6; ++j) CHECK(fast[static_cast<std::size_t>(j)] == from_records[static_cast<std::size_t>(j)]);
  // direct double loop over standardized values
  const double sigma = std::sqrt(cfg.window.sigma2);
  for (int j = 1; j <= 4; ++j) {
    long double acc = 0.0L;
    for (const auto& r : recs) {
      if (r.in_omega) acc += std::pow((r.x_window - cfg.window.mu) / sigma, j);
    }
    CHECK(fast[static_cast<std::size_t>(j - 1)] == doctest::Approx(static_cast<double>(acc / s.x_sums.count())).epsilon(1e-9));
  }
}

TEST_CASE("empirical moments reject an empty sample space") {
  CHECK_THROWS_AS((void)empirical_moments(std::vector<SampleRecord>{}, build_window(1e6), 4), DomainError);
}

TEST_CASE("small prime expectation") {
  const auto cfg = SampleConfig::make(100000, FnSpec::make(Family::S), {.y = 10.0, .z = 100.0});
  SampleSummary s;
  const auto recs = collect(cfg, 1, &s);
  CHECK(small_prime_expectation(recs, 1.5) == 0.0);
  std::uint64_t total = 0, members = 0;
  for (const auto& r : recs) {
    if (!r.in_omega) continue;
    ++members;
    for (auto [p, e] : oracle::trial_factor(static_cast<std::uint64_t>(r.f_value))) total += p <= 10;
  }
  const double brute = static_cast<double>(total) / static_cast<double>(members);
  CHECK(small_prime_expectation(recs, 10.0) == doctest::Approx(brute).epsilon(1e-14));
  CHECK(small_prime_expectation(s) == doctest::Approx(brute).epsilon(1e-14));
  double prev = 0.0;
  for (double y : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
    const double v = small_prime_expectation(recs, y);
    CHECK(v >= prev);
    prev = v;
  }
}
