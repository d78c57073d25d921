#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trimlab/distributions.hpp"
#include "trimlab/functionals.hpp"

namespace trimlab {

// Order statistics X_{1:n} <= ... <= X_{n:n}. Construction sorts; every
// statistic below depends on the sorted values only.
class SortedSample {
 public:
  explicit SortedSample(std::vector<double> values);
  explicit SortedSample(std::span<const double> values)
      : SortedSample(std::vector<double>(values.begin(), values.end())) {}

  std::span<const double> values() const noexcept { return values_; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  // 1-based: order(i) = X_{i:n}.
  double order(std::int64_t i) const noexcept { return values_[static_cast<std::size_t>(i - 1)]; }

 private:
  std::vector<double> values_;
};

std::vector<double> order_statistics(std::span<const double> sample);

// F_n^{-1}(u) = X_{i:n} for (i-1)/n < u <= i/n. DomainError unless 0 < u <= 1.
double empirical_quantile(const SortedSample& sample, double u);

// (1/n) sum_{i=k+1}^{n-m} X_{i:n}. InvalidTrimError unless 0 <= k < n-m <= n.
double trimmed_mean(const SortedSample& sample, std::int64_t k, std::int64_t m);

// int_{k/n}^{1-m/n} F_n^{-1}(u) du, evaluated cell by cell.
double trimmed_mean_integral(const SortedSample& sample, std::int64_t k, std::int64_t m);

// Same value as trimmed_mean without a full sort; reorders `scratch`.
double trimmed_mean_select(std::span<double> scratch, std::int64_t k, std::int64_t m);

// xi_a if x <= xi_a, x on (xi_a, xi_b], xi_b above. DomainError if xi_a > xi_b.
std::vector<double> winsorize(std::span<const double> sample, double xi_a, double xi_b);

inline double winsorize_value(double x, double xi_a, double xi_b) noexcept {
  if (x <= xi_a) return xi_a;
  return x > xi_b ? xi_b : x;
}

// N_nu = #{i : X_i <= xi_nu}.
std::int64_t count_at_most(const SortedSample& sample, double xi);

struct CountStatistics {
  std::int64_t n = 0;
  std::int64_t n_a = 0;  // N_{a_n}
  std::int64_t n_b = 0;  // N_{1-b_n}
  double a_cap = 0.0;    // N_{a_n} / n
  double b_cap = 0.0;    // (n - N_{1-b_n}) / n
};

CountStatistics counts(const SortedSample& sample, double xi_a, double xi_b);

struct Remainder {
  double r_n = 0.0;
  double alpha = 0.0;  // int_{a_n}^{A_n} [F_n^{-1} - xi_a]
  double beta = 0.0;   // int_{1-b_n}^{1-B_n} [F_n^{-1} - xi_b]
  double alpha_sum = 0.0;  // signed-sum evaluations of the same two terms
  double beta_sum = 0.0;
  double form_gap = 0.0;   // max discrepancy between the two evaluations
};

// Evaluates R_n = alpha - beta both as signed integrals of F_n^{-1} and as
// signed sums over order statistics. ConsistencyError when the two disagree
// beyond 1e-12 of the summed magnitude.
Remainder remainder(const SortedSample& sample, std::int64_t k, std::int64_t m, double xi_a, double xi_b);

struct SampleDecomposition {
  std::int64_t n = 0, k = 0, m = 0;
  double t_n = 0.0;
  double mu_n = 0.0;
  double w_bar = 0.0;
  double e_wbar = 0.0;
  double sigma_w = 0.0;
  double r_n = 0.0;
  double r_n_alpha = 0.0;
  double r_n_beta = 0.0;
  double form_gap = 0.0;
  // (t_n - mu_n) - (w_bar - e_wbar) - r_n, absolute and relative to
  // max(|t_n - mu_n|, sigma_w / sqrt(n)).
  double identity_residual = 0.0;
  double relative_residual = 0.0;
};

SampleDecomposition decompose(const SortedSample& sample, const Normalizers& norm);
SampleDecomposition decompose(const SortedSample& sample, const DistributionSpec& spec, std::int64_t k,
                              std::int64_t m);

}  // namespace trimlab
