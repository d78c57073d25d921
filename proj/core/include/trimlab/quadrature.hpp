#pragma once

#include <cstddef>
#include <functional>

namespace trimlab::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 1'000'000;
  // Pre-split the interval geometrically towards each endpoint, where
  // quantile integrands such as |F^{-1}(u)|^p may be singular.
  bool split_endpoints = true;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature of f over [a, b].
// The integrand is never evaluated at a or b.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

}  // namespace trimlab::quad
