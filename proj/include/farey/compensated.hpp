#pragma once

#include <cmath>

namespace farey {

/// Neumaier's variant of Kahan summation. Robust when an addend exceeds the
/// running sum in magnitude, which happens for the first few tail terms.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  CompensatedSum& operator+=(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + compensation_; }
  double raw_sum() const { return sum_; }
  double compensation() const { return compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Unevaluated pair hi + lo with |lo| <= ulp(hi)/2. Only the two operations the
/// tail caches need.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }

  DoubleDouble& operator+=(double x) {
    DoubleDouble s = two_sum(hi, x);
    s.lo += lo;
    *this = two_sum(s.hi, s.lo);
    return *this;
  }

  double value() const { return hi + lo; }
};

}  // namespace farey
