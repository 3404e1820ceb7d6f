#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "eklab/error.hpp"
#include "eklab/model.hpp"
#include "eklab/primes.hpp"
#include "oracles.hpp"

using namespace eklab;

TEST_CASE("build_window defaults at x = 10^7") {
  const double x = 1e7;
  const auto w = build_window(x);
  CHECK(w.y == doctest::Approx(std::log(x) * std::log(x)));
  CHECK(w.y == doctest::Approx(259.78).epsilon(1e-4));
  // log_3(10^7) = 1.0225 is below the floor 1.5
  CHECK(std::log(std::log(std::log(x))) == doctest::Approx(1.0225).epsilon(1e-4));
  CHECK(w.z == doctest::Approx(std::pow(x, 1.0 / 1.5)));
  CHECK(w.primes.front() == 263);
  CHECK(w.primes.back() <= w.z);
  // completeness against an independent count
  std::size_t expect = 0;
  for (std::uint64_t p = 260; p <= 46415; ++p) expect += oracle::is_prime(p);
  CHECK(w.primes.size() == expect);
  CHECK(w.mu > w.sigma2);
  CHECK(w.sigma2 > 0.0);
  CHECK(w.mu - w.sigma2 < 0.5);
}

TEST_CASE("build_window with overrides") {
  const auto w = build_window(1e6, {.y = 10.0, .z = 100.0});
  CHECK(w.primes.size() == 21);
  CHECK(w.primes.front() == 11);
  CHECK(w.primes.back() == 97);
  double mu = 0.0;
  for (auto p : w.primes) mu += 1.0 / static_cast<double>(p);
  CHECK(w.mu == doctest::Approx(mu).epsilon(1e-14));
  CHECK(w.mu == doctest::Approx(0.6266267248583948).epsilon(1e-14));
}

TEST_CASE("build_window errors name the parameter") {
  try {
    (void)build_window(1e6, {.y = 50.0, .z = 50.0});
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(e.param() == "y");
  }
  try {
    (void)build_window(10.0);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(e.param() == "x");
  }
  CHECK_THROWS_AS((void)build_window(1e6, {.y = 24.0, .z = 28.0}), ParameterError);  // no primes
  CHECK_THROWS_AS((void)build_window(1e3, {.y = 10.0, .z = 2e3}), ParameterError);
}

TEST_CASE("mu tracks log log z - log log y") {
  for (double x : {1e6, 1e7, 1e8, 1e9}) {
    const auto w = build_window(x);
    REQUIRE(w.z >= 9999.0);
    CAPTURE(x);
    CHECK(std::fabs(w.mu - (std::log(std::log(w.z)) - std::log(std::log(w.y)))) < 0.2);
  }
}

TEST_CASE("normal moments") {
  const auto n = normal_moments(8);
  const std::vector<double> expect{0, 1, 0, 3, 0, 15, 0, 105};
  for (std::size_t i = 0; i < 8; ++i) CHECK(n[i] == expect[i]);
  CHECK(normal_moments(2)[1] == 1.0);
  CHECK_THROWS_AS((void)normal_moments(9), ParameterError);
}

TEST_CASE("model moments of the toy window {3, 5}") {
  const auto w = window_from_primes({3, 5});
  CHECK(w.mu == doctest::Approx(8.0 / 15.0).epsilon(1e-15));
  CHECK(w.sigma2 == doctest::Approx(86.0 / 225.0).epsilon(1e-15));
  const auto m = model_moments(w, 4);
  CHECK(std::fabs(m[0]) < 1e-12);
  CHECK(std::fabs(m[1] - 1.0) < 1e-12);
  // exact third central moment 2/27 + 12/125 = 574/3375
  CHECK(m[2] == doctest::Approx((574.0 / 3375.0) / std::pow(86.0 / 225.0, 1.5)).epsilon(1e-12));
  CHECK(m[2] == doctest::Approx(0.7197210676601586).epsilon(1e-12));
}

TEST_CASE("model moments of a singleton window") {
  for (std::uint64_t p : {3, 7, 101}) {
    const double q = 1.0 / static_cast<double>(p);
    const auto m = model_moments(window_from_primes({p}), 3);
    CHECK(m[2] == doctest::Approx((1 - 2 * q) / std::sqrt(q * (1 - q))).epsilon(1e-12));
  }
}

TEST_CASE("cumulant moments agree with 2^|P| enumeration") {
  std::mt19937_64 rng(99);
  const auto pool = primes_up_to(400);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t size = 1 + rng() % 15;
    std::vector<std::uint64_t> ps = pool;
    std::shuffle(ps.begin(), ps.end(), rng);
    ps.resize(size);
    std::sort(ps.begin(), ps.end());
    const auto fast = model_moments(window_from_primes(ps), 6);
    const auto slow = oracle::enumerate_moments(ps, 6);
    for (int j = 0; j < 6; ++j) REQUIRE(std::fabs(fast[static_cast<std::size_t>(j)] - slow[static_cast<std::size_t>(j)]) <= 1e-10);
  }
}

TEST_CASE("model moments approach the Gaussian on nested windows") {
  double prev3 = INFINITY, prev4 = INFINITY;
  for (int j = 2; j <= 6; ++j) {
    const auto w = build_window(1e7, {.y = 10.0, .z = std::pow(10.0, j)});
    const auto m = model_moments(w, 4);
    CHECK(std::fabs(m[2]) < prev3);
    CHECK(std::fabs(m[3] - 3.0) < prev4);
    prev3 = std::fabs(m[2]);
    prev4 = std::fabs(m[3] - 3.0);
  }
}

TEST_CASE("model_moments validates k_max") {
  const auto w = window_from_primes({3, 5});
  CHECK_THROWS_AS((void)model_moments(w, 0), ParameterError);
  CHECK_THROWS_AS((void)model_moments(w, 9), ParameterError);
}

TEST_CASE("sample_model") {
  const auto toy = window_from_primes({3, 5});
  SUBCASE("support") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto y = sample_model(toy, 1, seed);
      REQUIRE(y.size() == 1);
      REQUIRE(y[0] <= 2);
    }
  }
  SUBCASE("mean within tolerance") {
    const auto y = sample_model(toy, 1'000'000, 12345);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    CHECK(std::fabs(mean - 8.0 / 15.0) < 0.005);
    // 5 sigma(Y) / sqrt(trials)
    CHECK(std::fabs(mean - 8.0 / 15.0) < 5 * std::sqrt(86.0 / 225.0) / 1000.0);
  }
  SUBCASE("determinism") {
    const auto w = build_window(1e6);
    CHECK(sample_model(w, 5000, 3) == sample_model(w, 5000, 3));
    CHECK(sample_model(w, 5000, 3) != sample_model(w, 5000, 4));
  }
  CHECK_THROWS_AS((void)sample_model(toy, 0, 1), ParameterError);
}
