#pragma once

#include <cmath>

namespace ewens::detail {

/// Neumaier-compensated accumulator. Keeps the running error term of the
/// naive sum, so the result is accurate to ~1 ulp independent of length.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace ewens::detail
