#include "trimlab/momentbound.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trimlab/error.hpp"
#include "trimlab/format.hpp"
#include "trimlab/parallel.hpp"
#include "trimlab/random.hpp"
#include "trimlab/summation.hpp"

namespace trimlab {

void validate(const BoundQuery& q) {
  if (!(q.k > 0.0) || !(q.delta > 0.0) || !std::isfinite(q.k) || !std::isfinite(q.delta)) {
    throw DomainError("moment orders k and delta must be positive");
  }
  const double rho = q.rho();
  const auto n = static_cast<double>(q.n);
  const auto i = static_cast<double>(q.i);
  if (q.i < 1 || q.i > q.n) throw OutOfWindowError("order index i must lie in [1, n]");
  if (!(n >= 2.0 * rho + 1.0)) {
    throw OutOfWindowError("n = " + std::to_string(q.n) + " below 2 rho + 1 = " + format_shortest(2.0 * rho + 1.0));
  }
  if (!(i >= rho && i <= n - rho + 1.0)) {
    throw OutOfWindowError("i = " + std::to_string(q.i) + " outside [rho, n - rho + 1] = [" + format_shortest(rho) +
                           ", " + format_shortest(n - rho + 1.0) + "]");
  }
}

double bound_constant(double rho) { return 2.0 * std::sqrt(rho) * std::exp(rho + 7.0 / 6.0); }

double bound_value(const BoundQuery& q, double abs_moment_delta) {
  validate(q);
  if (!std::isfinite(abs_moment_delta)) throw MomentError("E|X|^delta is infinite; the bound is vacuous");
  if (!(abs_moment_delta > 0.0)) throw MomentError("E|X|^delta must be positive");
  const double a = q.alpha();
  return bound_constant(q.rho()) * std::pow(abs_moment_delta / (a * (1.0 - a)), q.rho());
}

BoundVerification verify_bound(const DistributionSpec& spec, const BoundQuery& q, std::int64_t replications,
                               std::uint64_t seed, const RunOptions& options) {
  validate(q);
  if (replications < 10000) throw DomainError("verify_bound needs at least 10^4 replications");
  BoundVerification out;
  out.query = q;
  out.replications = replications;
  out.bound = bound_value(q, spec.abs_moment(q.delta));

  std::vector<double> values(static_cast<std::size_t>(replications));
  parallel_chunks(replications, options.workers, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> x(static_cast<std::size_t>(q.n));
    for (std::int64_t r = begin; r < end; ++r) {
      spec.sample_into(Substream(seed, SeedDomain::MomentBound, static_cast<std::uint64_t>(r)), x);
      std::sort(x.begin(), x.end());
      values[static_cast<std::size_t>(r)] = std::pow(std::fabs(x[static_cast<std::size_t>(q.i - 1)]), q.k);
    }
  });

  CompensatedSum sum;
  for (const double v : values) sum += v;
  const double dr = static_cast<double>(replications);
  out.mc_estimate = sum.value() / dr;
  CompensatedSum ss;
  for (const double v : values) ss += (v - out.mc_estimate) * (v - out.mc_estimate);
  out.standard_error = std::sqrt(ss.value() / (dr - 1.0) / dr);
  out.margin = out.bound / out.mc_estimate;
  out.dominated = out.mc_estimate + 3.0 * out.standard_error < out.bound;
  return out;
}

}  // namespace trimlab
