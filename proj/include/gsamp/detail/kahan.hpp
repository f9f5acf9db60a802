#pragma once

#include <cmath>
#include <complex>

namespace gsamp::detail {

// Neumaier-compensated accumulator. Exact-zero terms must be skipped by the
// caller when bit-identical sums across enlarged supports are required: adding
// 0.0 never changes the running sum or the compensation, so skipping is safe,
// and it keeps the term ordering identical to the smaller-support sum.
struct kahan_sum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }

  double value() const { return s + c; }
};

struct kahan_csum {
  kahan_sum re;
  kahan_sum im;

  void add(const std::complex<double>& z) {
    re.add(z.real());
    im.add(z.imag());
  }

  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace gsamp::detail
