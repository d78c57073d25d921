#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trimlab/conditions.hpp"
#include "trimlab/distributions.hpp"
#include "trimlab/functionals.hpp"
#include "trimlab/normal.hpp"
#include "trimlab/schedules.hpp"

namespace trimlab {

// 1 - Phi(x).
inline double normal_tail(double x) { return normal::tail(x); }

struct MillsRow {
  std::int64_t n = 0;
  double x = 0.0;  // c sqrt(log n)
  double tail = 0.0;
  double ratio = 0.0;  // [1/(1-Phi(x))] / [x sqrt(2 pi) n^{c^2/2}]
};

struct MillsReport {
  double c = 1.0;
  std::vector<MillsRow> rows;
  bool monotone = false;  // |ratio - 1| nonincreasing along the grid
};

// Requires c > 0 and every n >= 3.
MillsReport mills_check(double c, const std::vector<std::int64_t>& n_grid);

enum class Normalization { PopulationPair, MeanSwap, FullMoment, SigmaSwap, ExpectationSwap };
enum class Tails { Upper, Lower, Both };

std::string_view to_string(Normalization v) noexcept;
std::string_view to_string(Tails v) noexcept;
Normalization parse_normalization(std::string_view s);
Tails parse_tails(std::string_view s);

struct ExperimentConfig {
  DistributionSpec spec = DistributionSpec::normal(0.0, 1.0);
  TrimmingSchedule schedule = TrimmingSchedule::untrimmed();
  std::int64_t n = 1000;
  std::int64_t replications = 10000;
  std::uint64_t seed = 1;
  std::vector<double> x_grid;  // empty: default_x_grid(c, A, n)
  double c = 1.0;
  double A = 2.0;
  Normalization normalization = Normalization::PopulationPair;
  Tails tails = Tails::Upper;
  double level = 0.99;
  std::int64_t center_replications = 0;  // 0: same as replications
};

// 13 equally spaced points from -A to c sqrt(log n).
std::vector<double> default_x_grid(double c, double A, std::int64_t n);

// ConfigError on any violated constraint, including x_grid outside
// [-A, c sqrt(log n)].
void validate(const ExperimentConfig& config);

// Fills an empty x_grid and center_replications with their defaults.
ExperimentConfig resolved(ExperimentConfig config);

struct RunOptions {
  unsigned workers = 0;  // 0: available parallelism
};

struct CenterEstimate {
  std::int64_t replications = 0;
  double mean_tn = 0.0;
  double se_mean_tn = 0.0;
  double var_tn = 0.0;
  double se_var_tn = 0.0;
  double mean_wbar = 0.0;
  double se_mean_wbar = 0.0;
  double e_wbar = 0.0;
  double mu_n = 0.0;
  double sigma_w = 0.0;
  // sqrt(n) (mean_tn - mu_n) / sigma_W and its standard error.
  double scaled_mean_gap = 0.0;
  double scaled_mean_gap_se = 0.0;
  // sqrt(n var_tn) / sigma_W - 1 and its standard error.
  double scaled_sd_gap = 0.0;
  double scaled_sd_gap_se = 0.0;
  // sqrt(n) (mean_wbar - E W) / sigma_W.
  double scaled_wbar_gap = 0.0;
};

// Draws from the Centers seed domain, disjoint from the main experiment.
CenterEstimate estimate_centers(const ExperimentConfig& config, const RunOptions& options = {});

struct TailRow {
  double x = 0.0;
  std::int64_t count = 0;
  double p_hat = 0.0;
  double normal_tail = 0.0;
  double ratio = 0.0;
  double ci_lo = 0.0;  // binomial interval, ratio scale
  double ci_hi = 0.0;
  double p_lo = 0.0;  // binomial interval, probability scale
  double p_hi = 0.0;
  bool low_count = false;  // replications * normal_tail < 10
};

struct TailRatioReport {
  ExperimentConfig config;
  std::string config_hash;
  TrimPoint trim;
  Normalizers normalizers;
  double center = 0.0;
  double scale = 0.0;
  std::optional<CenterEstimate> centers;
  std::vector<TailRow> upper;
  std::vector<TailRow> lower;
  double ks_distance = 0.0;  // sup_x |empirical df of Z_n - Phi|
  // Not part of the deterministic body.
  double runtime_seconds = 0.0;
  unsigned workers = 1;
};

// T_n for replications 0..R-1 of the Experiment seed domain, by index.
std::vector<double> simulate_trimmed_means(const ExperimentConfig& config, const RunOptions& options = {});

// Tail report from precomputed trimmed means (as returned by
// simulate_trimmed_means for the same config). `centers` is required for
// MeanSwap and FullMoment.
TailRatioReport tail_report(const ExperimentConfig& config, std::span<const double> trimmed_means,
                            const std::optional<CenterEstimate>& centers);

TailRatioReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// sup_x |G_N(x) - Phi(x)| for the empirical df G_N of `values`.
double ks_distance_to_normal(std::span<const double> values);

struct AuditRow {
  double delta = 0.0;
  std::int64_t count = 0;  // #{sqrt(n) |R_n| / sigma_W > delta}
  double p_hat = 0.0;
};

struct AuditReport {
  std::int64_t replications = 0;
  TrimPoint trim;
  double max_relative_residual = 0.0;
  double max_form_gap = 0.0;
  std::vector<AuditRow> rows;
};

inline constexpr double kIdentityTolerance = 1e-10;

// Decomposition identity check on every replication of the Audit seed domain.
// ConsistencyError when a relative residual exceeds kIdentityTolerance.
AuditReport decomposition_audit(const ExperimentConfig& config, const std::vector<double>& delta_grid,
                                const RunOptions& options = {});

struct ExpectationInterval {
  std::string mode;  // "spec" or "data"
  TrimPoint trim;
  double level = 0.95;
  double t_n = 0.0;
  double sigma = 0.0;  // sigma_W (spec) or sample Winsorized sd (data)
  double z = 0.0;
  double half_width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  ConditionReport condition;
  bool justified = false;
  std::string warning;
};

// T_n +- z_{(1+level)/2} sigma / sqrt(n). Spec mode draws its sample from the
// Interval seed domain and uses sigma_W; data mode Winsorizes at the sample
// order statistics (X_{k:n}, X_{n-m:n}]. The c_an2 verdict at moment order
// `p` decides `justified`. DegenerateWindowError when sigma is zero.
ExpectationInterval ci_expectation(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n,
                                   double level, std::uint64_t seed, double p);
ExpectationInterval ci_expectation(std::span<const double> data, const TrimmingSchedule& schedule, double level,
                                   double p);

struct CoverageReport {
  std::int64_t trials = 0;
  std::int64_t covered = 0;
  double coverage = 0.0;
  double ci_lo = 0.0;  // 99% binomial interval for the coverage
  double ci_hi = 0.0;
  double target = 0.0;  // E X_1
  double half_width = 0.0;
  double mean_center_gap = 0.0;  // mean of sqrt(n) (T_n - E X_1) / sigma_W
  TrimPoint trim;
};

// Repeats the spec-mode interval on independent samples from the Coverage
// seed domain and counts how often it contains E X_1.
CoverageReport coverage_experiment(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n,
                                   double level, std::int64_t trials, std::uint64_t seed,
                                   const RunOptions& options = {});

}  // namespace trimlab
