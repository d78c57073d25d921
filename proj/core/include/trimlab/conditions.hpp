#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trimlab/distributions.hpp"
#include "trimlab/schedules.hpp"

namespace trimlab {

// Finite-n diagnostics for the asymptotic trimming conditions. A sequence
// observed on a grid of n can only be consistent or inconsistent with a
// limit statement; when the fitted model is poor the verdict is inconclusive.
enum class Verdict { Consistent, Inconsistent, Inconclusive };

std::string_view to_string(Verdict v) noexcept;

struct DiagnosticRow {
  std::int64_t n = 0;
  std::vector<std::pair<std::string, double>> values;
};

struct ConditionReport {
  std::string condition;
  std::vector<std::int64_t> n_grid;
  std::vector<DiagnosticRow> rows;
  std::string model;  // regressor of the chosen fit: "log_n" or "log_log_n"
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  std::vector<ConditionReport> parts;
};

// RMS residual in log scale above which a fit cannot support a verdict.
inline constexpr double kFitResidualThreshold = 0.1;

// {1e3, 3e3, 1e4, 3e4, 1e5, 1e6, 1e7}.
std::vector<std::int64_t> default_n_grid();

// log n / (k_n ^ m_n) -> 0, and a_n v b_n = O((log n)^-gamma) with
// gamma > 2p/(p-2). Parts "c_kn" and "c_an". Requires p > 2.
ConditionReport check_intermediate(const TrimmingSchedule& schedule, double p, const std::vector<std::int64_t>& n_grid);

// a_n v b_n = o((n log n)^{-p/(2(p-1))}). Requires p > 1.
ConditionReport check_c_an2(const TrimmingSchedule& schedule, double p, const std::vector<std::int64_t>& n_grid);

// 0 < a_1, b_2 < 1, a_2 < b_1 with a_1, a_2 the lower/upper limits of a_n and
// b_1, b_2 those of 1 - b_n.
ConditionReport check_heavy(const TrimmingSchedule& schedule, const std::vector<std::int64_t>& n_grid);

struct SmoothnessGH {
  double g = 0.0;
  double h = 0.0;
};

// G_n(t) = F^{-1}(a_n + t sqrt(a_n log n / n)) - F^{-1}(a_n), H_n likewise at
// 1 - b_n. RangeError when a shifted argument leaves (0,1).
SmoothnessGH smoothness_GH(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n);

// G_n(t), H_n(t) = O((log n)^{-(1+eps)}) for some eps in `eps_grid`, for each t.
ConditionReport check_cgh(const DistributionSpec& spec, const TrimmingSchedule& schedule,
                          const std::vector<double>& t_set, const std::vector<std::int64_t>& n_grid,
                          const std::vector<double>& eps_grid = {0.05, 0.1, 0.25, 0.5, 1.0});

// sqrt(a_n)/sigma_W [F^{-1}(a_n + t sqrt(a_n/n)) - F^{-1}(a_n)], t clamped to
// +-sqrt(a_n n)/2. psi_2n mirrors it at 1 - b_n with b_n in place of a_n.
double psi_1n(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n);
double psi_2n(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n);

}  // namespace trimlab
