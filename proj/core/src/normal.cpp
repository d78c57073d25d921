#include "trimlab/normal.hpp"

#include <cmath>
#include <limits>

#include "trimlab/error.hpp"

namespace trimlab::normal {

double pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double tail(double x) {
  if (!std::isfinite(x)) throw DomainError("normal tail: non-finite argument");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

}  // namespace trimlab::normal
