#pragma once

#include <cmath>
#include <span>

namespace permstat {

/// Neumaier's variant of Kahan summation. Order of accumulation is the order
/// of calls, so results are reproducible for a fixed input order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  void add(std::span<const double> values) noexcept {
    for (double v : values) add(v);
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  acc.add(values);
  return acc.value();
}

}  // namespace permstat
