#pragma once

#if defined(__FAST_MATH__)
#error "Compensated summation is defeated by -ffast-math; build without it."
#endif

#include <cmath>

namespace selfforce {

// Neumaier's variant of Kahan summation.  Keeps a running compensation term
// so that long alternating series and quadrature panel sums do not lose
// low-order bits.  The correction is applied once, when value() is read.
class NeumaierSum {
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

  NeumaierSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace selfforce
