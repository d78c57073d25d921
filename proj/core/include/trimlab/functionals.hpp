#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trimlab/distributions.hpp"
#include "trimlab/schedules.hpp"

namespace trimlab {

// Population functionals over the quantile window (u, 1 - v), 0 <= u < 1 - v <= 1.
//
//   mu(u, 1-v)     = int_u^{1-v} F^{-1}(s) ds
//   sigma2(u, 1-v) = int int (s ^ t - s t) dF^{-1}(s) dF^{-1}(t) over [u, 1-v)^2
//
// Stieltjes integrals against the left-continuous F^{-1} use half-open
// intervals [a, b), so an atom of dF^{-1} at u is counted and one at 1 - v is
// not. With that convention sigma2(a, 1-b) equals the variance of
// F^{-1}(clamp(U, a, 1-b)), i.e. of the Winsorized variable.

// Closed form where the family admits one, adaptive quadrature otherwise.
// DomainError on an empty or inverted window; MomentError when the window
// reaches an unbounded end of the support and E|X| is infinite.
double mu_functional(const DistributionSpec& spec, double u, double v);
double mu_functional_quadrature(const DistributionSpec& spec, double u, double v);

// Nonnegative. Winsorized single-integral form for continuous families, a
// direct double Stieltjes sum for step-function quantiles.
double sigma2_functional(const DistributionSpec& spec, double u, double v);

struct WinsorizedMoments {
  double mean = 0.0;
  double var = 0.0;
  double xi_lo = 0.0;  // F^{-1}(a), or F^{-1}(0+) when a = 0
  double xi_hi = 0.0;  // F^{-1}(1-b), or the upper end of the support when b = 0
};

// Moments of W = clamp of X to (xi_a, xi_{1-b}], in the quantile domain:
//   E W = a xi_a + mu(a, 1-b) + b xi_{1-b}.
// DegenerateWindowError when xi_a == xi_{1-b}.
WinsorizedMoments winsorized_moments(const DistributionSpec& spec, double a, double b);
WinsorizedMoments winsorized_moments_quadrature(const DistributionSpec& spec, double a, double b);

struct PopulationFunctionals {
  double u = 0.0, v = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double winsor_mean = 0.0;
  double winsor_var = 0.0;
};

PopulationFunctionals population_functionals(const DistributionSpec& spec, double u, double v);

// Left-continuous step function on (0,1): value[j] on (break[j-1], break[j]],
// value[0] on (0, break[0]], value.back() past the last break.
class StepQuantile {
 public:
  StepQuantile(std::vector<double> breaks, std::vector<double> values);

  static StepQuantile of(const TwoPointMixture& mixture);

  // Step approximation of s -> F^{-1}(clamp(s, a, 1-b)) with `cells` equal
  // cells on [a, 1-b], each carrying the cell average of F^{-1}.
  // Requires 0 < a < 1 - b < 1.
  static StepQuantile winsorized_approximation(const DistributionSpec& spec, double a, double b,
                                               std::size_t cells);

  double operator()(double s) const;
  std::span<const double> breaks() const noexcept { return breaks_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// Double Stieltjes sum over the atoms of a step quantile inside [u, 1-v).
double sigma2_stieltjes(const StepQuantile& q, double u, double v);

// sigma2(a, 1-b) by the double Stieltjes sum on winsorized_approximation with
// `cells` and 2 `cells` cells, Richardson-extrapolated in the cell width.
// Requires 0 < a < 1 - b < 1.
double sigma2_step_extrapolated(const DistributionSpec& spec, double a, double b, std::size_t cells);

struct Normalizers {
  TrimPoint trim;
  double xi_a = 0.0;
  double xi_b = 0.0;
  double mu_n = 0.0;         // mu(a_n, 1 - b_n)
  double winsor_mean = 0.0;  // E W_i
  double sigma_w = 0.0;      // sqrt(Var W_i)
};

// (mu_n, sigma_W) at the schedule's (a_n, b_n). Results are memoised per
// (spec, a_n, b_n) in a process-wide cache safe for concurrent readers.
// DegenerateWindowError when sigma_W = 0.
Normalizers normalizers(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n);
Normalizers normalizers(const DistributionSpec& spec, const TrimPoint& trim);

}  // namespace trimlab
