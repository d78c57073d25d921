#pragma once

#include <cstdint>

#include "trimlab/distributions.hpp"
#include "trimlab/montecarlo.hpp"

namespace trimlab {

// E|X_{i:n}|^k < C(rho) [(alpha_i (1 - alpha_i))^{-1} E|X_1|^delta]^rho with
// rho = k / delta, alpha_i = i / (n + 1) and C(rho) = 2 sqrt(rho) exp(rho + 7/6).
struct BoundQuery {
  double k = 1.0;
  double delta = 1.0;
  std::int64_t i = 1;
  std::int64_t n = 1;

  double rho() const noexcept { return k / delta; }
  double alpha() const noexcept { return static_cast<double>(i) / static_cast<double>(n + 1); }
};

// OutOfWindowError unless n >= 2 rho + 1 and rho <= i <= n - rho + 1
// (real-valued rho, no rounding); DomainError for non-positive k or delta.
void validate(const BoundQuery& q);

double bound_constant(double rho);

// MomentError when abs_moment_delta is infinite or not positive.
double bound_value(const BoundQuery& q, double abs_moment_delta);

struct BoundVerification {
  BoundQuery query;
  std::int64_t replications = 0;
  double mc_estimate = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound / mc_estimate
  bool dominated = false;  // mc_estimate + 3 SE < bound
};

// Monte Carlo estimate of E|X_{i:n}|^k from the MomentBound seed domain,
// sorting each sample. Requires replications >= 10^4.
BoundVerification verify_bound(const DistributionSpec& spec, const BoundQuery& q, std::int64_t replications,
                               std::uint64_t seed, const RunOptions& options = {});

}  // namespace trimlab
