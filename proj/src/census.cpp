#include "eklab/census.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include "eklab/error.hpp"
#include "eklab/factor.hpp"
#include "eklab/numeric.hpp"
#include "eklab/parallel.hpp"
#include "eklab/primes.hpp"

namespace eklab {
namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 mod_of(i64 v, u64 p) {
  const i64 r = v % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

u64 abs_of(i64 v) { return v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v); }

u64 inverse_mod(u64 a, u64 p) {
  // p prime, a != 0 mod p
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(p), new_r = static_cast<i64>(a % p);
  while (new_r != 0) {
    const i64 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return mod_of(t, p);
}

std::vector<u64> squarefree_primes(u64 d) {
  if (d < 2) throw DomainError("d must exceed 1");
  if (d % 2 == 0) throw DomainError("d must be odd");
  std::vector<u64> primes;
  for (const auto& pp : factorize(d).factors()) {
    if (pp.exponent != 1) throw DomainError("d = " + std::to_string(d) + " is not squarefree");
    primes.push_back(pp.prime);
  }
  return primes;
}

DClass classify_with(std::span<const u64> d_primes, const LinearForm& lf) {
  bool shared = false;
  for (u64 p : d_primes) {
    const bool pa = mod_of(lf.a, p) == 0;
    const bool pb = mod_of(lf.b, p) == 0;
    if (pa != pb) return DClass::Incompatible;
    shared = shared || pa;
  }
  return shared ? DClass::CompatNotIdeal : DClass::Ideal;
}

// Residue class of P mod q solving P a + b = 0 (mod d); nullopt if none.
struct Congruence {
  u64 modulus = 1;
  u64 residue = 0;
};

std::optional<Congruence> solve(std::span<const u64> d_primes, const LinearForm& lf) {
  Congruence c;
  for (u64 p : d_primes) {
    const u64 ap = mod_of(lf.a, p), bp = mod_of(lf.b, p);
    if (ap == 0) {
      if (bp != 0) return std::nullopt;
      continue;  // every P works mod p
    }
    const u64 rp = static_cast<u64>((static_cast<unsigned __int128>(p - bp) % p) * inverse_mod(ap, p) % p);
    // CRT: c.residue + c.modulus * t = rp (mod p)
    const u64 diff = (rp + p - c.residue % p) % p;
    const u64 t = static_cast<u64>(static_cast<unsigned __int128>(diff) * inverse_mod(c.modulus % p, p) % p);
    c.residue += c.modulus * t;
    c.modulus *= p;
  }
  return c;
}

}  // namespace

const char* to_string(DClass c) noexcept {
  switch (c) {
    case DClass::Ideal: return "ideal";
    case DClass::CompatNotIdeal: return "compat_not_ideal";
    case DClass::Incompatible: return "incompatible";
  }
  return "?";
}

DClass classify_m(u64 d, const LinearForm& lf) { return classify_with(squarefree_primes(d), lf); }

DClass classify_m(u64 d, u64 m, const FnSpec& spec) {
  const auto primes = squarefree_primes(d);
  if (m < 2) throw DomainError("classify_m: m must be >= 2");
  return classify_with(primes, linear_form(spec, arith_point(m)));
}

std::vector<DCountReport> dcount(std::span<const u64> ds, const SampleConfig& cfg, std::size_t threads) {
  if (cfg.x > kCensusMaxX) throw ParameterError("x", "dcount requires x <= 10^7");
  std::vector<std::vector<u64>> d_primes;
  d_primes.reserve(ds.size());
  for (u64 d : ds) d_primes.push_back(squarefree_primes(d));

  std::vector<DCountReport> reports(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) reports[i].d = ds[i];

  const u64 seg = segment_size();

  // Left side: scan the sample space directly.
  const u64 segments = (cfg.x - 2) / seg + 1;
  u64 omega_count = 0;
  ordered_parallel(
      segments, threads,
      [&](std::size_t k) {
        const u64 lo = 2 + k * seg;
        const u64 hi = std::min(cfg.x + 1, lo + seg);
        const auto block = sieve_block(lo, hi, seg);
        std::vector<u64> hits(ds.size(), 0);
        u64 members = 0;
        for (u64 n = lo; n < hi; ++n) {
          const auto pt = block.point(n);
          if (!in_sample_space(pt, cfg)) continue;
          ++members;
          const i64 f = evaluate(cfg.spec, pt);
          for (std::size_t i = 0; i < ds.size(); ++i) {
            if (mod_of(f, ds[i]) == 0) ++hits[i];
          }
        }
        return std::pair{members, std::move(hits)};
      },
      [&](std::size_t, std::pair<u64, std::vector<u64>>&& part) {
        omega_count += part.first;
        for (std::size_t i = 0; i < ds.size(); ++i) reports[i].lhs += part.second[i];
      });

  // Right side: cofactors m, congruence classes for P, prime iteration.
  const u64 max_m = cfg.max_cofactor();
  const BlockTable m_data(max_m + 1, threads);
  const auto primes = primes_up_to(cfg.x / 2);
  const u64 l_floor = cfg.smoothness_floor();
  const u64 m_segments = max_m >= 2 ? (max_m - 2) / seg + 1 : 0;

  struct RightPart {
    std::vector<u64> count, ideal, compat, incompat;
    std::vector<CompensatedSum> gcd_sum;
  };
  ordered_parallel(
      m_segments, threads,
      [&](std::size_t k) {
        RightPart part;
        part.count.assign(ds.size(), 0);
        part.ideal = part.compat = part.incompat = part.count;
        part.gcd_sum.resize(ds.size());
        const u64 lo = 2 + k * seg;
        const u64 hi = std::min(max_m + 1, lo + seg);
        for (u64 m = lo; m < hi; ++m) {
          if (cfg.spec.family == Family::PhiShift && m <= cfg.spec.m0) continue;
          const auto pt = m_data.point(m);
          const auto lf = linear_form(cfg.spec, pt);
          const u64 lm = std::max(l_floor, pt.lpf);
          const u64 top = cfg.x / m;
          const auto first = std::upper_bound(primes.begin(), primes.end(), lm);
          const auto last = std::upper_bound(first, primes.end(), top);
          for (std::size_t i = 0; i < ds.size(); ++i) {
            switch (classify_with(d_primes[i], lf)) {
              case DClass::Ideal: ++part.ideal[i]; break;
              case DClass::CompatNotIdeal:
                ++part.compat[i];
                part.gcd_sum[i].add(static_cast<double>(std::gcd(ds[i], abs_of(lf.a))) /
                                    (static_cast<double>(m) * static_cast<double>(ds[i])));
                break;
              case DClass::Incompatible: ++part.incompat[i]; break;
            }
            const auto cls = solve(d_primes[i], lf);
            if (!cls || first >= last) continue;
            if (cls->modulus == 1) {
              part.count[i] += static_cast<u64>(last - first);
              continue;
            }
            u64 c = 0;
            for (auto it = first; it != last; ++it) c += (*it % cls->modulus == cls->residue);
            part.count[i] += c;
          }
        }
        return part;
      },
      [&](std::size_t, RightPart&& part) {
        for (std::size_t i = 0; i < ds.size(); ++i) {
          reports[i].rhs += part.count[i];
          reports[i].ideal += part.ideal[i];
          reports[i].compat_not_ideal += part.compat[i];
          reports[i].incompatible += part.incompat[i];
          reports[i].gcd_sum += part.gcd_sum[i].value();
        }
      });

  for (auto& r : reports) {
    r.omega_count = omega_count;
    r.expected = static_cast<double>(omega_count) / static_cast<double>(r.d);
    if (omega_count > 0) {
      r.discrepancy = std::fabs(static_cast<double>(r.lhs) / static_cast<double>(omega_count) -
                                1.0 / static_cast<double>(r.d));
    }
    if (r.lhs != r.rhs) {
      throw AssertionFailure("dcount identity violated for d = " + std::to_string(r.d) + ": lhs " +
                             std::to_string(r.lhs) + " != rhs " + std::to_string(r.rhs));
    }
  }
  return reports;
}

DCountReport dcount(u64 d, const SampleConfig& cfg, std::size_t threads) {
  const u64 ds[] = {d};
  return dcount(ds, cfg, threads).front();
}

DList enumerate_d(const PrimeWindow& w, int k, u64 cap) {
  if (k < 1) throw ParameterError("k", "k must be >= 1");
  DList out;
  const auto& ps = w.primes;
  // depth-first over ascending prime subsets
  auto rec = [&](auto&& self, std::size_t start, u64 d, int depth) -> void {
    for (std::size_t i = start; i < ps.size(); ++i) {
      if (ps[i] > cap / d) break;
      const u64 next = d * ps[i];
      out.ds.push_back(next);
      if (depth + 1 < k) self(self, i + 1, next, depth + 1);
    }
  };
  rec(rec, 0, 1, 0);
  std::sort(out.ds.begin(), out.ds.end());
  // largest admissible d: product of the min(k, |window|) largest primes
  long double largest = 1.0L;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), ps.size());
  for (std::size_t i = 0; i < take; ++i) largest *= static_cast<long double>(ps[ps.size() - 1 - i]);
  out.partial = largest > static_cast<long double>(cap);
  return out;
}

std::vector<u64> interleave_by_omega(std::span<const u64> ds, std::size_t limit) {
  std::vector<std::vector<u64>> by_omega;
  for (u64 d : ds) {
    const unsigned w = factorize(d).omega();
    if (by_omega.size() <= w) by_omega.resize(w + 1);
    by_omega[w].push_back(d);
  }
  std::vector<u64> out;
  for (std::size_t round = 0; out.size() < limit; ++round) {
    bool any = false;
    for (const auto& group : by_omega) {
      if (round < group.size() && out.size() < limit) {
        out.push_back(group[round]);
        any = true;
      }
    }
    if (!any) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double progression_error(u64 T, u64 q) {
  if (q < 2) throw ParameterError("q", "q must be >= 2");
  if (T < 2) throw ParameterError("T", "T must be >= 2");
  if (T > kMaxProgressionT) throw ParameterError("T", "T must be <= 10^8");
  const auto qf = factorize(q);
  u64 phi_q = 1;
  for (const auto& [p, e] : qf.factors()) {
    u64 pk = 1;
    for (std::uint32_t i = 0; i < e; ++i) pk *= p;
    phi_q *= pk / p * (p - 1);
  }
  const auto primes = primes_up_to(T);
  std::vector<u64> freq(primes.size() + 2, 0);  // freq[c] = classes holding c primes
  freq[0] = phi_q;
  std::unordered_map<u64, u64> counts;
  u64 c_min = 0, c_max = 0, pi = 0;
  double best = 0.0;
  for (u64 p : primes) {
    ++pi;
    if (q % p != 0) {
      u64& c = counts[p % q];
      --freq[c];
      ++freq[c + 1];
      if (c == c_min && freq[c] == 0) ++c_min;
      ++c;
      c_max = std::max(c_max, c);
    }
    const double mean = static_cast<double>(pi) / static_cast<double>(phi_q);
    best = std::max({best, static_cast<double>(c_max) - mean, mean - static_cast<double>(c_min)});
  }
  return best;
}

HypothesisSums hypothesis_sums(const FnSpec& spec, u64 x, int k, const PrimeWindow& w, u64 cap,
                               std::size_t threads) {
  if (x > kCensusMaxX) throw ParameterError("x", "hypotheses requires x <= 10^7");
  if (x < 3) throw ParameterError("x", "x must be >= 3");
  if (k < 1 || k > kMaxMoment) throw ParameterError("k", "k must lie in [1, 8]");
  const DList dlist = enumerate_d(w, k, cap);
  HypothesisSums out;
  out.d_count = dlist.ds.size();
  out.partial = dlist.partial;

  // window prime -> entries of the d-list it divides
  std::unordered_map<u64, std::vector<std::pair<u64, std::vector<u64>>>> by_prime;
  for (u64 d : dlist.ds) {
    std::vector<u64> ps;
    for (const auto& pp : factorize(d).factors()) ps.push_back(pp.prime);
    for (u64 p : ps) by_prime[p].emplace_back(d, ps);
  }

  const double y = w.y;
  const u64 seg = segment_size();
  const u64 segments = (x - 2) / seg + 1;
  CompensatedSum s29, s30;
  ordered_parallel(
      segments, threads,
      [&](std::size_t blk) {
        const u64 lo = 2 + blk * seg;
        const u64 hi = std::min(x + 1, lo + seg);
        const auto block = sieve_block(lo, hi, seg);
        CompensatedSum a29, a30;
        for (u64 m = lo; m < hi; ++m) {
          const auto lf = linear_form(spec, block.point(m));
          const u64 g = std::gcd(abs_of(lf.a), abs_of(lf.b));
          if (g == 1) continue;
          const double inv_m = 1.0 / static_cast<double>(m);
          std::vector<u64> shared;  // window primes dividing both a and b
          unsigned small = 0;
          if (g == 0) continue;  // a = b = 0 cannot occur for m >= 2
          for (const auto& pp : factorize(g).factors()) {
            if (static_cast<double>(pp.prime) <= y) ++small;
            if (w.contains(pp.prime)) shared.push_back(pp.prime);
          }
          if (small > 0) a29.add(small * inv_m);
          if (m >= x) continue;  // the compatibility sum runs over m < x
          for (u64 p : shared) {
            const auto it = by_prime.find(p);
            if (it == by_prime.end()) continue;
            for (const auto& [d, ps] : it->second) {
              // count d once: at its smallest prime that divides both a and b
              const u64 first_shared = *std::find_if(ps.begin(), ps.end(), [&](u64 q) {
                return std::find(shared.begin(), shared.end(), q) != shared.end();
              });
              if (first_shared != p) continue;
              if (classify_with(ps, lf) != DClass::CompatNotIdeal) continue;
              a30.add(static_cast<double>(std::gcd(d, abs_of(lf.a))) * inv_m / static_cast<double>(d));
            }
          }
        }
        return std::pair{a29, a30};
      },
      [&](std::size_t, std::pair<CompensatedSum, CompensatedSum>&& part) {
        s29.merge(part.first);
        s30.merge(part.second);
      });
  out.sum29 = s29.value();
  out.sum30 = s30.value();
  return out;
}

}  // namespace eklab
