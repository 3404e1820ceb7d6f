#include "eklab/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "eklab/error.hpp"
#include "eklab/numeric.hpp"
#include "eklab/primes.hpp"

namespace eklab {
namespace {

using Poly = std::vector<double>;  // coefficients in p, lowest degree first

// Cumulants of Bernoulli(p) as polynomials in p:
// kappa_1 = p, kappa_{n+1} = p (1 - p) d/dp kappa_n.
std::vector<Poly> bernoulli_cumulant_polys(int k_max) {
  std::vector<Poly> out(static_cast<std::size_t>(k_max) + 1);
  out[1] = {0.0, 1.0};
  for (int n = 1; n < k_max; ++n) {
    const Poly& k = out[static_cast<std::size_t>(n)];
    Poly deriv(k.size() > 1 ? k.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < k.size(); ++i) deriv[i - 1] = static_cast<double>(i) * k[i];
    Poly next(deriv.size() + 2, 0.0);
    for (std::size_t i = 0; i < deriv.size(); ++i) {
      next[i + 1] += deriv[i];
      next[i + 2] -= deriv[i];
    }
    out[static_cast<std::size_t>(n) + 1] = std::move(next);
  }
  return out;
}

double eval_poly(const Poly& poly, double p) {
  double r = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) r = r * p + *it;
  return r;
}

void check_k(int k_max) {
  if (k_max < 1 || k_max > kMaxMoment) {
    throw ParameterError("kmax", "k_max must lie in [1, 8], got " + std::to_string(k_max));
  }
}

void fill_sums(PrimeWindow& w) {
  CompensatedSum mu, var;
  for (auto p : w.primes) {
    const double q = 1.0 / static_cast<double>(p);
    mu.add(q);
    var.add(q * (1.0 - q));
  }
  w.mu = mu.value();
  w.sigma2 = var.value();
}

}  // namespace

double effective_log3(double x, double l3_floor) {
  const double l3 = log_iter(x, 3);
  return std::isnan(l3) ? l3_floor : std::max(l3, l3_floor);
}

double effective_log4(double x, double l4_floor) {
  const double l4 = log_iter(x, 4);
  return std::isnan(l4) ? l4_floor : std::max(l4, l4_floor);
}

double default_y(double x) {
  const double l = std::log(x);
  return l * l;
}

double default_z(double x, double l3_floor) { return std::pow(x, 1.0 / effective_log3(x, l3_floor)); }

double default_smoothness(double x, double l4_floor) {
  return std::pow(x, 1.0 / effective_log4(x, l4_floor));
}

PrimeWindow build_window(double x, const WindowParams& params) {
  if (!(x >= 3.0) || !std::isfinite(x)) throw ParameterError("x", "x must be a finite real >= 3");
  if (!(params.l3_floor >= 1.0)) throw ParameterError("l3-floor", "l3 floor must be >= 1");
  if (!(params.l4_floor >= 2.0)) throw ParameterError("l4-floor", "l4 floor must be >= 2");
  if ((!params.y || !params.z) && !(log_iter(x, 3) > 0.0)) {
    throw ParameterError("x", "x too small for default window (log_3 x <= 0); pass --y and --z");
  }
  PrimeWindow w;
  w.x = x;
  w.y = params.y.value_or(default_y(x));
  w.z = params.z.value_or(default_z(x, params.l3_floor));
  if (!(w.y > 2.0)) throw ParameterError("y", "y must exceed 2");
  if (!(w.y < w.z)) throw ParameterError("y", "window requires y < z");
  if (w.z > x) throw ParameterError("z", "window requires z <= x");
  w.primes = primes_between(static_cast<std::uint64_t>(std::floor(w.y)),
                            static_cast<std::uint64_t>(std::floor(w.z)));
  if (w.primes.empty()) throw ParameterError("z", "window (y, z] contains no primes");
  fill_sums(w);
  return w;
}

PrimeWindow window_from_primes(std::vector<std::uint64_t> primes) {
  if (primes.empty()) throw DomainError("window_from_primes: empty prime list");
  std::sort(primes.begin(), primes.end());
  PrimeWindow w;
  w.y = static_cast<double>(primes.front()) - 0.5;
  w.z = static_cast<double>(primes.back());
  w.x = w.z;
  w.primes = std::move(primes);
  fill_sums(w);
  return w;
}

std::vector<double> model_moments(const PrimeWindow& w, int k_max) {
  check_k(k_max);
  if (w.primes.empty()) throw DomainError("model_moments: empty window");
  const auto polys = bernoulli_cumulant_polys(k_max);
  std::vector<double> kappa(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int j = 2; j <= k_max; ++j) {
    CompensatedSum acc;
    for (auto p : w.primes) acc.add(eval_poly(polys[static_cast<std::size_t>(j)], 1.0 / static_cast<double>(p)));
    kappa[static_cast<std::size_t>(j)] = acc.value();
  }
  // central moments: m_n = sum_{j=1}^{n} C(n-1, j-1) kappa_j m_{n-j}, kappa_1 = 0
  std::vector<double> central(static_cast<std::size_t>(k_max) + 1, 0.0);
  central[0] = 1.0;
  for (int n = 1; n <= k_max; ++n) {
    double binom = 1.0;  // C(n-1, j-1)
    double m = 0.0;
    for (int j = 1; j <= n; ++j) {
      m += binom * kappa[static_cast<std::size_t>(j)] * central[static_cast<std::size_t>(n - j)];
      binom = binom * (n - j) / j;
    }
    central[static_cast<std::size_t>(n)] = m;
  }
  const double sigma = std::sqrt(kappa[2]);
  std::vector<double> out(static_cast<std::size_t>(k_max));
  for (int j = 1; j <= k_max; ++j) {
    out[static_cast<std::size_t>(j - 1)] = central[static_cast<std::size_t>(j)] / std::pow(sigma, j);
  }
  return out;
}

std::vector<double> normal_moments(int k_max) {
  check_k(k_max);
  std::vector<double> out(static_cast<std::size_t>(k_max), 0.0);
  double dfact = 1.0;
  for (int j = 2; j <= k_max; j += 2) {
    out[static_cast<std::size_t>(j - 1)] = dfact;
    dfact *= j + 1;
  }
  return out;
}

std::vector<std::uint32_t> sample_model(const PrimeWindow& w, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw ParameterError("trials", "trials must be >= 1");
  std::vector<std::uint32_t> y(trials, 0);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>((rng() >> 11) + 1) * 0x1p-53; };  // (0, 1]
  // Successes of Y_p across trials are generated by geometric skips.
  for (auto p : w.primes) {
    const double log_fail = std::log1p(-1.0 / static_cast<double>(p));
    std::uint64_t t = 0;
    for (;;) {
      const double skip = std::floor(std::log(uniform()) / log_fail);
      if (skip >= static_cast<double>(trials - t)) break;
      t += static_cast<std::uint64_t>(skip);
      ++y[t];
      if (++t >= trials) break;
    }
  }
  return y;
}

MomentReport make_moment_report(std::vector<double> empirical, const PrimeWindow& w) {
  MomentReport r;
  r.k_max = static_cast<int>(empirical.size());
  r.model = model_moments(w, r.k_max);
  r.normal = normal_moments(r.k_max);
  r.empirical = std::move(empirical);
  r.diffs.resize(r.empirical.size());
  for (std::size_t j = 0; j < r.diffs.size(); ++j) r.diffs[j] = r.empirical[j] - r.model[j];
  return r;
}

}  // namespace eklab
