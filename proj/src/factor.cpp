#include "eklab/factor.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace eklab {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialBound = 1000;

constexpr auto make_small_primes() {
  std::array<std::uint16_t, 168> out{};
  std::size_t k = 0;
  for (std::uint16_t v = 2; v < kTrialBound; ++v) {
    bool prime = true;
    for (std::uint16_t d = 2; d * d <= v; ++d) {
      if (v % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out[k++] = v;
  }
  return out;
}

constexpr auto kSmallPrimes = make_small_primes();
static_assert(kSmallPrimes.back() == 997);

inline u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 e, u64 m) noexcept {
  u64 r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin(u64 n, std::initializer_list<u64> witnesses) noexcept {
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : witnesses) {
    a %= n;
    if (a == 0) continue;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 splitmix64(u64 v) noexcept {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

// Brent's cycle detection with batched gcds. n must be odd and composite.
u64 brent_rho(u64 n) noexcept {
  u64 seed = splitmix64(n);
  for (;;) {
    const u64 c = seed % (n - 1) + 1;
    u64 y = splitmix64(seed) % n;
    seed = splitmix64(seed);
    auto f = [&](u64 v) {
      const u64 sq = mul_mod(v, v, n);
      return sq >= n - c ? sq - (n - c) : sq + c;
    };

    constexpr u64 kBatch = 128;
    u64 g = 1, q = 1, x = 0, ys = 0;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 lim = std::min(kBatch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(u64 n, std::vector<PrimePower>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back({n, 1});
    return;
  }
  const u64 d = brent_rho(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

bool is_prime(u64 v) noexcept {
  if (v < 2) return false;
  for (auto p : kSmallPrimes) {
    if (v == p) return true;
    if (v % p == 0) return false;
    if (static_cast<u64>(p) * p > v) return true;
  }
  if (v < (u64{1} << 32)) return miller_rabin(v, {2, 7, 61});
  return miller_rabin(v, {2, 325, 9375, 28178, 450775, 9780504, 1795265022});
}

unsigned Factorization::omega_prime() const noexcept {
  unsigned total = 0;
  for (const auto& pp : factors_) total += pp.exponent;
  return total;
}

Factorization factorize(u64 v) {
  std::vector<PrimePower> factors;
  if (v <= 1) return Factorization(v, std::move(factors));
  u64 rest = v;
  for (auto p16 : kSmallPrimes) {
    const u64 p = p16;
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    std::uint32_t e = 0;
    do {
      rest /= p;
      ++e;
    } while (rest % p == 0);
    factors.push_back({p, e});
  }
  if (rest > 1) {
    // every prime factor of rest exceeds the trial bound here
    if (rest < kTrialBound * kTrialBound) {
      factors.push_back({rest, 1});
    } else {
      std::vector<PrimePower> large;
      split_large(rest, large);
      std::sort(large.begin(), large.end(),
                [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
      for (const auto& pp : large) {
        if (!factors.empty() && factors.back().prime == pp.prime) {
          factors.back().exponent += pp.exponent;
        } else {
          factors.push_back(pp);
        }
      }
    }
  }
  return Factorization(v, std::move(factors));
}

WindowSplit split_by_window(const Factorization& f, const PrimeWindow& w) noexcept {
  WindowSplit s;
  for (const auto& pp : f.factors()) {
    const auto p = static_cast<double>(pp.prime);
    if (p <= w.y) {
      ++s.below;
    } else if (p <= w.z) {
      ++s.inside;
    } else {
      ++s.above;
    }
  }
  return s;
}

unsigned omega_in_window(u64 v, const PrimeWindow& w) {
  if (v <= 1) return 0;
  return split_by_window(factorize(v), w).inside;
}

}  // namespace eklab
