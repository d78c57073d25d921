#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "trimlab/error.hpp"

namespace trimlab::normal {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double pdf(double x) noexcept;

// Phi(x), accurate in the lower tail.
double cdf(double x) noexcept;

// 1 - Phi(x) without cancellation: relative error well below 1e-13 on |x| <= 8.
// Throws DomainError on non-finite x.
double tail(double x);

namespace detail {

template <int N>
double horner(const double (&c)[N], double x) noexcept {
  double acc = c[N - 1];
  for (int i = N - 2; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

inline constexpr double kCentralNum[] = {
    3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
inline constexpr double kCentralDen[] = {
    1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2,
    5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
inline constexpr double kNearNum[] = {
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kNearDen[] = {
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
inline constexpr double kFarNum[] = {
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kFarDen[] = {
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

}  // namespace detail

// Phi^{-1}(u) for u in (0,1), Wichura's AS 241 (PPND16), ~1e-16 relative.
// Returns -inf at u = 0 and +inf at u = 1.
inline double quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("normal quantile: u outside [0,1]");
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return std::numeric_limits<double>::infinity();

  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * detail::horner(detail::kCentralNum, r) / detail::horner(detail::kCentralDen, r);
  }
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    z = detail::horner(detail::kNearNum, r) / detail::horner(detail::kNearDen, r);
  } else {
    r -= 5.0;
    z = detail::horner(detail::kFarNum, r) / detail::horner(detail::kFarDen, r);
  }
  return q < 0.0 ? -z : z;
}

// quantile() applied in place to values already known to lie in (0,1). The
// central branch runs over every element so it vectorises; the tails are then
// recomputed. Results equal quantile() bit for bit.
inline void quantile_in_place(double* x, std::size_t n) noexcept {
  constexpr std::size_t kBlock = 256;
  double u[kBlock];
  for (std::size_t base = 0; base < n; base += kBlock) {
    const std::size_t len = n - base < kBlock ? n - base : kBlock;
    double* out = x + base;
    bool tails = false;
    for (std::size_t i = 0; i < len; ++i) {
      u[i] = out[i];
      const double q = u[i] - 0.5;
      const double r = 0.180625 - q * q;
      out[i] = q * detail::horner(detail::kCentralNum, r) / detail::horner(detail::kCentralDen, r);
      tails |= std::fabs(q) > 0.425;
    }
    if (!tails) continue;
    for (std::size_t i = 0; i < len; ++i) {
      if (std::fabs(u[i] - 0.5) > 0.425) out[i] = quantile(u[i]);
    }
  }
}

}  // namespace trimlab::normal
