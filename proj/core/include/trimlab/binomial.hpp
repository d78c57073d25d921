#pragma once

#include <cstdint>

namespace trimlab {

struct BinomialInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided interval for a binomial proportion from
// `successes` out of `trials` at confidence `level`. Closed at the edges:
// lo = 0 when successes = 0, hi = 1 when successes = trials.
BinomialInterval clopper_pearson(std::int64_t successes, std::int64_t trials, double level);

}  // namespace trimlab
