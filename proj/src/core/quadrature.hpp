#ifndef MUSIELAK_CORE_QUADRATURE_HPP
#define MUSIELAK_CORE_QUADRATURE_HPP

#include <cmath>

namespace musielak {

// Neumaier compensated accumulator. Quadrature sums and norm solves add
// terms in a fixed lexicographic node order so reports are bit-stable
// across runs and thread counts.
class CompensatedSum {
public:
  void add(double x) noexcept {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace musielak

#endif
