#include "eklab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eklab/error.hpp"

namespace eklab {

double normal_cdf(double u) noexcept { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

Ecdf::Ecdf(std::vector<double> scores) {
  std::vector<std::pair<double, std::uint64_t>> pairs;
  pairs.reserve(scores.size());
  for (double s : scores) pairs.emplace_back(s, 1);
  build(std::move(pairs));
}

Ecdf::Ecdf(std::span<const double> values, std::span<const std::uint64_t> weights) {
  if (values.size() != weights.size()) throw DomainError("Ecdf: values and weights differ in length");
  std::vector<std::pair<double, std::uint64_t>> pairs;
  pairs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0) pairs.emplace_back(values[i], weights[i]);
  }
  build(std::move(pairs));
}

void Ecdf::build(std::vector<std::pair<double, std::uint64_t>> pairs) {
  for (const auto& [v, w] : pairs) {
    if (!std::isfinite(v)) throw DomainError("Ecdf: non-finite score");
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [v, w] : pairs) {
    if (values_.empty() || values_.back() != v) {
      values_.push_back(v);
      cumulative_.push_back(n_);
    }
    n_ += w;
    cumulative_.back() = n_;
  }
  if (n_ == 0) throw DomainError("Ecdf: empty sample");
}

double Ecdf::operator()(double u) const noexcept {
  const auto it = std::upper_bound(values_.begin(), values_.end(), u);
  if (it == values_.begin()) return 0.0;
  return static_cast<double>(cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1]) /
         static_cast<double>(n_);
}

double ks_distance(const Ecdf& e) noexcept {
  const double n = static_cast<double>(e.n());
  double best = 0.0;
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < e.values().size(); ++i) {
    const double phi = normal_cdf(e.values()[i]);
    const double left = static_cast<double>(below) / n;  // F just before the jump
    const double right = static_cast<double>(e.cumulative()[i]) / n;
    best = std::max({best, std::fabs(left - phi), std::fabs(right - phi)});
    below = e.cumulative()[i];
  }
  return best;
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t t = underflow + overflow;
  for (auto c : counts) t += c;
  return t;
}

Histogram histogram(std::span<const double> scores, std::span<const std::uint64_t> weights, int bins,
                    double lo, double hi) {
  if (bins < 1) throw ParameterError("bins", "bins must be >= 1");
  if (!(lo < hi)) throw ParameterError("range", "histogram range requires lo < hi");
  if (!weights.empty() && weights.size() != scores.size()) {
    throw DomainError("histogram: scores and weights differ in length");
  }
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + width * i;
  h.edges.back() = hi;
  h.normal_mass.resize(static_cast<std::size_t>(bins));
  for (std::size_t i = 0; i < h.normal_mass.size(); ++i) {
    const double a = h.edges[i], b = h.edges[i + 1];
    // upper tail form keeps symmetric bins exactly symmetric
    h.normal_mass[i] = a >= 0 ? normal_cdf(-a) - normal_cdf(-b) : normal_cdf(b) - normal_cdf(a);
  }
  h.underflow_mass = normal_cdf(lo);
  h.overflow_mass = normal_cdf(-hi);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const std::uint64_t w = weights.empty() ? 1 : weights[i];
    const double s = scores[i];
    if (s < lo) {
      h.underflow += w;
    } else if (s >= hi) {
      h.overflow += w;
    } else {
      auto bin = static_cast<std::size_t>((s - lo) / width);
      bin = std::min(bin, h.counts.size() - 1);
      while (bin > 0 && s < h.edges[bin]) --bin;
      while (bin + 1 < h.counts.size() && s >= h.edges[bin + 1]) ++bin;
      h.counts[bin] += w;
    }
  }
  return h;
}

Histogram histogram(std::span<const double> scores, int bins, double lo, double hi) {
  return histogram(scores, {}, bins, lo, hi);
}

}  // namespace eklab
