#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace eklab {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Iterated natural logarithm log_k(x); NaN once an iterate is not positive.
[[nodiscard]] inline double log_iter(double x, int k) noexcept {
  for (int i = 0; i < k; ++i) {
    if (!(x > 0.0)) return std::nan("");
    x = std::log(x);
  }
  return x;
}

/// Decimal rendering of a 128-bit unsigned value.
[[nodiscard]] inline std::string to_string_u128(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace eklab
