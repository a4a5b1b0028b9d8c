#pragma once

#include <cmath>

namespace atpqrm {

// Neumaier's variant of Kahan summation. The running correction is kept
// separately and folded in on read.
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  Real value() const { return sum_ + comp_; }

  // Exact when factor is a power of two.
  void scale(Real factor) {
    sum_ *= factor;
    comp_ *= factor;
  }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

template <typename Real>
class NaiveSum {
 public:
  void add(Real x) { sum_ += x; }
  Real value() const { return sum_; }
  void scale(Real factor) { sum_ *= factor; }

 private:
  Real sum_ = 0;
};

// log of [2(n+q-1/4)]! / (2^n n!) for the Bargmann prefactor.
inline double log_bargmann_prefactor(long n, double q) {
  const double top = 2.0 * (static_cast<double>(n) + q - 0.25);
  return std::lgamma(top + 1.0) - static_cast<double>(n) * std::log(2.0) -
         std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace atpqrm
