#pragma once
// Brute-force reference implementations. These deliberately share no code
// with the library: divisor loops and trial division only.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline bool is_prime(u64 v) {
  if (v < 2) return false;
  for (u64 d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> small, large;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::map<u64, unsigned> trial_factor(u64 n) {
  std::map<u64, unsigned> f;
  for (u64 d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u64 sigma(u64 n) {
  u64 s = 0;
  for (u64 d : divisors(n)) s += d;
  return s;
}
inline u64 tau(u64 n) { return divisors(n).size(); }
inline u64 phi_by_gcd(u64 n) {
  u64 c = 0;
  for (u64 k = 1; k <= n; ++k) c += gcd(k, n) == 1;
  return c;
}
inline u64 phi(u64 n) {
  u64 r = n;
  for (auto [p, e] : trial_factor(n)) r = r / p * (p - 1);
  return r;
}
inline unsigned omega(u64 n) { return static_cast<unsigned>(trial_factor(n).size()); }
inline u64 lpf(u64 n) { return n == 1 ? 1 : trial_factor(n).rbegin()->first; }
inline bool lpf_sq_divides(u64 n) {
  const u64 p = lpf(n);
  return n % (p * p) == 0;
}
inline u64 beta(u64 n) {
  u64 s = 0;
  for (auto [p, e] : trial_factor(n)) s += p;
  return s;
}
inline u64 big_a(u64 n) {
  u64 s = 0;
  for (auto [p, e] : trial_factor(n)) s += e * p;
  return s;
}

/// Every function value of n from one trial factorization (sigma and tau by
/// their multiplicative formulas).
struct Values {
  u64 sigma = 1, phi = 1, tau = 1, beta = 0, big_a = 0;
  unsigned omega = 0;
};
inline Values values_by_trial(u64 n) {
  Values v;
  for (auto [p, e] : trial_factor(n)) {
    u64 pk = 1, geo = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      geo += pk;
    }
    v.sigma *= geo;
    v.phi *= pk / p * (p - 1);
    v.tau *= e + 1;
    v.beta += p;
    v.big_a += e * p;
    ++v.omega;
  }
  return v;
}

/// f(n) by name, straight from the definitions.
enum class F { S, Beta, BigA, Cototient, NPlusTau, NMinusTau, NPlusOmega, NMinusOmega, PhiShift };
inline i64 f_value(F f, u64 n, i64 shift = 0) {
  const i64 v = static_cast<i64>(n);
  switch (f) {
    case F::S: return static_cast<i64>(sigma(n)) - v;
    case F::Beta: return static_cast<i64>(beta(n));
    case F::BigA: return static_cast<i64>(big_a(n));
    case F::Cototient: return v - static_cast<i64>(phi(n));
    case F::NPlusTau: return v + static_cast<i64>(tau(n));
    case F::NMinusTau: return v - static_cast<i64>(tau(n));
    case F::NPlusOmega: return v + omega(n);
    case F::NMinusOmega: return v - static_cast<i64>(omega(n));
    case F::PhiShift: return static_cast<i64>(phi(n)) + shift;
  }
  return 0;
}

inline i64 f_from_values(F f, u64 n, const Values& v, i64 shift = 0) {
  const i64 x = static_cast<i64>(n);
  switch (f) {
    case F::S: return static_cast<i64>(v.sigma) - x;
    case F::Beta: return static_cast<i64>(v.beta);
    case F::BigA: return static_cast<i64>(v.big_a);
    case F::Cototient: return x - static_cast<i64>(v.phi);
    case F::NPlusTau: return x + static_cast<i64>(v.tau);
    case F::NMinusTau: return x - static_cast<i64>(v.tau);
    case F::NPlusOmega: return x + v.omega;
    case F::NMinusOmega: return x - static_cast<i64>(v.omega);
    case F::PhiShift: return static_cast<i64>(v.phi) + shift;
  }
  return 0;
}

/// Exact central moments of Y = sum of Bernoulli(1/p) by enumerating all
/// 2^|primes| outcomes; returns E[Ytilde^j] for j = 1..k.
inline std::vector<double> enumerate_moments(const std::vector<u64>& primes, int k) {
  const std::size_t n = primes.size();
  std::vector<long double> dist(n + 1, 0.0L);  // P(Y = v)
  for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
    long double pr = 1.0L;
    unsigned v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long double q = 1.0L / static_cast<long double>(primes[i]);
      if (mask >> i & 1) {
        pr *= q;
        ++v;
      } else {
        pr *= 1.0L - q;
      }
    }
    dist[v] += pr;
  }
  long double mu = 0.0L;
  for (std::size_t v = 0; v <= n; ++v) mu += dist[v] * v;
  long double var = 0.0L;
  for (std::size_t v = 0; v <= n; ++v) var += dist[v] * (v - mu) * (v - mu);
  const long double sd = std::sqrt(var);
  std::vector<double> out;
  for (int j = 1; j <= k; ++j) {
    long double m = 0.0L;
    for (std::size_t v = 0; v <= n; ++v) m += dist[v] * std::pow((v - mu) / sd, j);
    out.push_back(static_cast<double>(m));
  }
  return out;
}

}  // namespace oracle
