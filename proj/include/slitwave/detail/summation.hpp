#pragma once

#include <cmath>
#include <complex>

namespace slitwave::detail {

// Neumaier compensated sum. Results depend only on the order of add() calls.
class compensated_sum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class compensated_complex_sum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  compensated_sum re_;
  compensated_sum im_;
};

}  // namespace slitwave::detail
