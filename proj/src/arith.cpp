#include "eklab/arith.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>

#include "eklab/error.hpp"
#include "eklab/factor.hpp"
#include "eklab/parallel.hpp"
#include "eklab/primes.hpp"

namespace eklab {
namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("arithmetic overflow in 64-bit sieve data");
  return r;
}

i64 to_signed(u64 v) {
  if (v > static_cast<u64>(std::numeric_limits<i64>::max())) {
    throw DomainError("value exceeds signed 64-bit range");
  }
  return static_cast<i64>(v);
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw DomainError("arithmetic overflow in f(n)");
  return r;
}

constexpr std::int64_t kMaxShift = 3000;

// Largest m with phi(m) = shift, 0 if none. phi(m) >= sqrt(m) for m > 6.
u64 phi_preimage_max(std::int64_t shift) {
  if (shift <= 0) return 0;
  const u64 target = static_cast<u64>(shift);
  const u64 limit = std::max<u64>(7, target * target) + 1;
  u64 best = 0;
  const u64 seg = segment_size();
  for (u64 lo = 2; lo < limit; lo += seg) {
    const auto block = sieve_block(lo, std::min(limit, lo + seg), seg);
    for (u64 n = block.lo; n < block.hi; ++n) {
      if (block.phi[n - block.lo] == target) best = n;
    }
  }
  return best;
}

}  // namespace

FnSpec FnSpec::make(Family family, std::int64_t shift) {
  FnSpec spec;
  spec.family = family;
  if (family == Family::PhiShift) {
    if (shift == 0) throw ParameterError("shift", "phi+a requires a nonzero shift a");
    if (shift > kMaxShift || shift < -kMaxShift) {
      throw ParameterError("shift", "phi+a shift must satisfy |a| <= 3000");
    }
    spec.shift = shift;
    spec.m0 = phi_preimage_max(shift);
  }
  return spec;
}

std::string FnSpec::name() const {
  switch (family) {
    case Family::S: return "s";
    case Family::Beta: return "beta";
    case Family::BigA: return "A";
    case Family::Cototient: return "cototient";
    case Family::NPlusTau: return "n+tau";
    case Family::NMinusTau: return "n-tau";
    case Family::NPlusOmega: return "n+omega";
    case Family::NMinusOmega: return "n-omega";
    case Family::PhiShift:
      return shift < 0 ? "phi" + std::to_string(shift) : "phi+" + std::to_string(shift);
  }
  return "?";
}

FnSpec parse_fn(std::string_view name, std::int64_t shift) {
  if (name == "s") return FnSpec::make(Family::S);
  if (name == "beta") return FnSpec::make(Family::Beta);
  if (name == "A") return FnSpec::make(Family::BigA);
  if (name == "cototient" || name == "n-phi") return FnSpec::make(Family::Cototient);
  if (name == "n+tau") return FnSpec::make(Family::NPlusTau);
  if (name == "n-tau") return FnSpec::make(Family::NMinusTau);
  if (name == "n+omega") return FnSpec::make(Family::NPlusOmega);
  if (name == "n-omega") return FnSpec::make(Family::NMinusOmega);
  if (name == "phi+a") return FnSpec::make(Family::PhiShift, shift);
  if (name.size() > 4 && name.substr(0, 3) == "phi" && (name[3] == '+' || name[3] == '-')) {
    std::int64_t v = 0;
    const auto digits = name.substr(4);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
      return FnSpec::make(Family::PhiShift, name[3] == '-' ? -v : v);
    }
  }
  throw ParameterError("fn", "unknown function family '" + std::string(name) + "'");
}

std::vector<FnSpec> all_families(std::int64_t shift) {
  return {FnSpec::make(Family::S),          FnSpec::make(Family::Beta),
          FnSpec::make(Family::BigA),       FnSpec::make(Family::Cototient),
          FnSpec::make(Family::NPlusTau),   FnSpec::make(Family::NMinusTau),
          FnSpec::make(Family::NPlusOmega), FnSpec::make(Family::NMinusOmega),
          FnSpec::make(Family::PhiShift, shift)};
}

ArithPoint SieveBlock::point(u64 n) const {
  if (!contains(n)) throw DomainError("n = " + std::to_string(n) + " outside sieve block");
  const std::size_t i = n - lo;
  return {n, sigma[i], phi[i], tau[i], omega_small[i], lpf[i], lpf_sq_divides[i]};
}

u64 segment_size() {
  constexpr u64 kDefault = u64{1} << 20;
  const char* env = std::getenv("EKLAB_SEGMENT_SIZE");
  if (env == nullptr || *env == '\0') return kDefault;
  u64 v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 16 || v > (u64{1} << 28)) {
    throw ParameterError("EKLAB_SEGMENT_SIZE", "EKLAB_SEGMENT_SIZE must be an integer in [16, 2^28]");
  }
  return v;
}

SieveBlock sieve_block(u64 lo, u64 hi) { return sieve_block(lo, hi, segment_size()); }

SieveBlock sieve_block(u64 lo, u64 hi, u64 max_len) {
  if (lo < 2) throw DomainError("sieve_block: lo must be >= 2");
  if (hi <= lo) throw DomainError("sieve_block: empty range");
  if (hi > (u64{1} << 63)) throw DomainError("sieve_block: hi must be <= 2^63");
  if (hi - lo > max_len) throw ResourceError("sieve_block: segment exceeds configured length");

  const std::size_t len = hi - lo;
  SieveBlock b;
  b.lo = lo;
  b.hi = hi;
  b.sigma.assign(len, 1);
  b.phi.assign(len, 1);
  b.tau.assign(len, 1);
  b.omega_small.assign(len, 0);
  b.lpf.assign(len, 1);
  b.lpf_sq_divides.assign(len, false);

  std::vector<u64> rest(len);
  for (std::size_t i = 0; i < len; ++i) rest[i] = lo + i;

  for (u64 p : primes_up_to(isqrt(hi - 1))) {
    for (u64 n = (lo + p - 1) / p * p; n < hi; n += p) {
      const std::size_t i = n - lo;
      u64 r = rest[i] / p;
      u64 pk = p;         // p^e
      u64 geo = 1 + p;    // 1 + p + ... + p^e
      std::uint32_t e = 1;
      while (r % p == 0) {
        r /= p;
        pk *= p;
        geo += pk;
        ++e;
      }
      rest[i] = r;
      b.sigma[i] = checked_mul(b.sigma[i], geo);
      b.phi[i] = checked_mul(b.phi[i], pk / p * (p - 1));
      b.tau[i] *= e + 1;
      ++b.omega_small[i];
      b.lpf[i] = p;  // primes arrive ascending
      b.lpf_sq_divides[i] = e >= 2;
    }
  }
  // What is left is 1 or a single prime above sqrt(hi).
  for (std::size_t i = 0; i < len; ++i) {
    const u64 r = rest[i];
    if (r == 1) continue;
    b.sigma[i] = checked_mul(b.sigma[i], r + 1);
    b.phi[i] = checked_mul(b.phi[i], r - 1);
    b.tau[i] *= 2;
    ++b.omega_small[i];
    b.lpf[i] = r;
    b.lpf_sq_divides[i] = false;
  }
  return b;
}

ArithPoint arith_point(u64 n) {
  if (n < 2) throw DomainError("arith_point: n must be >= 2");
  const auto f = factorize(n);
  ArithPoint pt{n, 1, 1, 1, f.omega(), f.largest_prime(), f.factors().back().exponent >= 2};
  for (const auto& [p, e] : f.factors()) {
    u64 pk = 1, geo = 1;
    for (std::uint32_t k = 0; k < e; ++k) {
      pk = checked_mul(pk, p);
      geo += pk;
    }
    pt.sigma = checked_mul(pt.sigma, geo);
    pt.phi = checked_mul(pt.phi, pk / p * (p - 1));
    pt.tau *= e + 1;
  }
  return pt;
}

BlockTable::BlockTable(u64 hi, std::size_t threads) : hi_(std::max<u64>(hi, 2)), seg_(segment_size()) {
  const u64 count = (hi_ - 2 + seg_ - 1) / seg_;
  blocks_.resize(count);
  ordered_parallel(
      count, threads,
      [&](std::size_t k) {
        const u64 lo = 2 + k * seg_;
        return sieve_block(lo, std::min(hi_, lo + seg_), seg_);
      },
      [&](std::size_t k, SieveBlock&& block) { blocks_[k] = std::move(block); });
}

ArithPoint BlockTable::point(u64 n) const {
  if (n < 2 || n >= hi_) throw DomainError("n = " + std::to_string(n) + " outside block table");
  return blocks_[(n - 2) / seg_].point(n);
}

u64 s_of(u64 n, const SieveBlock& block) {
  if (n < 2) throw DomainError("s_of: n must be >= 2");
  return block.point(n).sigma - n;
}

u64 beta_of(u64 n) {
  if (n < 2) throw DomainError("beta: n must be >= 2");
  u64 sum = 0;
  for (const auto& pp : factorize(n).factors()) sum += pp.prime;
  return sum;
}

u64 big_a_of(u64 n) {
  if (n < 2) throw DomainError("A: n must be >= 2");
  u64 sum = 0;
  for (const auto& pp : factorize(n).factors()) sum += pp.exponent * pp.prime;
  return sum;
}

std::int64_t evaluate(const FnSpec& spec, const ArithPoint& pt) {
  if (pt.n < 2) throw DomainError("evaluate: n must be >= 2");
  const i64 n = to_signed(pt.n);
  switch (spec.family) {
    case Family::S: return to_signed(pt.sigma - pt.n);
    case Family::Beta: return to_signed(beta_of(pt.n));
    case Family::BigA: return to_signed(big_a_of(pt.n));
    case Family::Cototient: return to_signed(pt.n - pt.phi);
    case Family::NPlusTau: return checked_add(n, to_signed(pt.tau));
    case Family::NMinusTau: return n - to_signed(pt.tau);
    case Family::NPlusOmega: return checked_add(n, pt.omega);
    case Family::NMinusOmega: return n - static_cast<i64>(pt.omega);
    case Family::PhiShift: return checked_add(to_signed(pt.phi), spec.shift);
  }
  throw DomainError("evaluate: unknown family");
}

LinearForm linear_form(const FnSpec& spec, const ArithPoint& m) {
  if (m.n < 1) throw DomainError("linear_form: m must be >= 1");
  const i64 mv = to_signed(m.n);
  LinearForm lf;
  switch (spec.family) {
    case Family::S:  // s(mP) = sigma(m)(P + 1) - mP
      lf = {to_signed(m.sigma - m.n), to_signed(m.sigma)};
      break;
    case Family::Beta:
      lf = {1, m.n == 1 ? 0 : to_signed(beta_of(m.n))};
      break;
    case Family::BigA:
      lf = {1, m.n == 1 ? 0 : to_signed(big_a_of(m.n))};
      break;
    case Family::Cototient:  // mP - (P - 1) phi(m)
      lf = {to_signed(m.n - m.phi), to_signed(m.phi)};
      break;
    case Family::NPlusTau:
      lf = {mv, 2 * to_signed(m.tau)};
      break;
    case Family::NMinusTau:
      lf = {mv, -2 * to_signed(m.tau)};
      break;
    case Family::NPlusOmega:
      lf = {mv, static_cast<i64>(m.omega) + 1};
      break;
    case Family::NMinusOmega:
      lf = {mv, -(static_cast<i64>(m.omega) + 1)};
      break;
    case Family::PhiShift:  // (P - 1) phi(m) + shift
      lf = {to_signed(m.phi), spec.shift - to_signed(m.phi)};
      lf.b_vanishes = lf.b == 0;
      break;
  }
  return lf;
}

}  // namespace eklab
