#pragma once

#include <stdexcept>
#include <string>

namespace spikelab {

// Thrown when a spike value falls inside [1 - sqrt(y), 1 + sqrt(y)], where no
// outlier sample eigenvalue exists and the spike maps are undefined.
class CriticalIntervalError : public std::domain_error {
 public:
  CriticalIntervalError(double alpha, double lo, double hi)
      : std::domain_error("alpha = " + std::to_string(alpha) +
                          " lies in the critical interval [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        alpha_(alpha),
        lo_(lo),
        hi_(hi) {}

  double alpha() const noexcept { return alpha_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double alpha_, lo_, hi_;
};

// Thrown when a real evaluation point sits inside the spectral support.
class SupportDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace spikelab
