#include "eklab/primes.hpp"

#include <algorithm>
#include <cmath>

namespace eklab {

std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  out.push_back(2);
  // index i represents 2i + 1
  const std::uint64_t half = (n - 1) / 2 + 1;
  std::vector<bool> composite(half, false);
  for (std::uint64_t i = 1; i < half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(p);
    for (std::uint64_t j = p * p / 2; j < half && p <= n / p; j += p) composite[j] = true;
  }
  return out;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi <= lo || hi < 2) return out;
  const auto base = primes_up_to(isqrt(hi));
  constexpr std::uint64_t kSegment = std::uint64_t{1} << 20;
  std::vector<bool> composite;
  for (std::uint64_t start = std::max<std::uint64_t>(lo + 1, 2); start <= hi;) {
    const std::uint64_t stop = std::min(hi, start + kSegment - 1);  // inclusive
    composite.assign(stop - start + 1, false);
    for (auto p : base) {
      if (p > stop / p) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t m = first; m <= stop; m += p) composite[m - start] = true;
    }
    for (std::uint64_t v = start; v <= stop; ++v) {
      if (!composite[v - start]) out.push_back(v);
    }
    if (stop == hi) break;
    start = stop + 1;
  }
  return out;
}

}  // namespace eklab
