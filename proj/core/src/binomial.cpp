#include "trimlab/binomial.hpp"

#include <boost/math/special_functions/beta.hpp>

#include "trimlab/error.hpp"

namespace trimlab {

BinomialInterval clopper_pearson(std::int64_t successes, std::int64_t trials, double level) {
  if (trials <= 0) throw DomainError("binomial interval needs trials >= 1");
  if (successes < 0 || successes > trials) throw DomainError("binomial interval needs 0 <= successes <= trials");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  const double alpha = 1.0 - level;
  const auto x = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  BinomialInterval ci;
  if (successes > 0) ci.lo = boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
  if (successes < trials) ci.hi = boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
  return ci;
}

}  // namespace trimlab
