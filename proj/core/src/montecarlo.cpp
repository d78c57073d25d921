#include "trimlab/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "trimlab/binomial.hpp"
#include "trimlab/error.hpp"
#include "trimlab/estimators.hpp"
#include "trimlab/format.hpp"
#include "trimlab/parallel.hpp"
#include "trimlab/random.hpp"
#include "trimlab/serialization.hpp"
#include "trimlab/summation.hpp"

namespace trimlab {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Calls fn(replication, sample) with sample = X_1..X_n of that replication.
// The sample buffer is scratch: fn may reorder it.
template <class Fn>
void for_each_sample(const DistributionSpec& spec, std::uint64_t seed, SeedDomain domain, std::int64_t n,
                     std::int64_t replications, unsigned workers, Fn&& fn) {
  parallel_chunks(replications, workers, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> buf(static_cast<std::size_t>(n));
    spec.visit([&](const auto& family) {
      for (std::int64_t r = begin; r < end; ++r) {
        const Substream stream(seed, domain, static_cast<std::uint64_t>(r));
        stream.fill(static_cast<std::uint64_t>(n), [&](std::uint64_t i, double u) { buf[i] = u; });
        draw_in_place(family, std::span<double>(buf));
        fn(r, std::span<double>(buf));
      }
    });
  });
}

double mean_of(std::span<const double> v) {
  CompensatedSum s;
  for (const double x : v) s += x;
  return s.value() / static_cast<double>(v.size());
}

struct SampleMoments {
  double mean = 0.0;
  double var = 0.0;  // divisor N - 1
  double m4 = 0.0;   // fourth central moment, divisor N
};

SampleMoments moments_of(std::span<const double> v) {
  SampleMoments m;
  m.mean = mean_of(v);
  CompensatedSum s2, s4;
  for (const double x : v) {
    const double d = x - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  const auto count = static_cast<double>(v.size());
  m.var = v.size() > 1 ? s2.value() / (count - 1.0) : 0.0;
  m.m4 = s4.value() / count;
  return m;
}

bool needs_centers(Normalization v) { return v == Normalization::MeanSwap || v == Normalization::FullMoment; }

std::vector<TailRow> tail_rows(const std::vector<double>& x_grid, std::span<const double> sorted_z, bool upper,
                               double level) {
  const auto reps = static_cast<std::int64_t>(sorted_z.size());
  const double dr = static_cast<double>(reps);
  std::vector<TailRow> rows;
  for (const double x : x_grid) {
    TailRow row;
    row.x = x;
    if (upper) {
      row.count = reps - (std::upper_bound(sorted_z.begin(), sorted_z.end(), x) - sorted_z.begin());
    } else {
      row.count = std::lower_bound(sorted_z.begin(), sorted_z.end(), -x) - sorted_z.begin();
    }
    row.p_hat = static_cast<double>(row.count) / dr;
    row.normal_tail = normal_tail(x);
    row.ratio = row.p_hat / row.normal_tail;
    const auto ci = clopper_pearson(row.count, reps, level);
    row.p_lo = ci.lo;
    row.p_hi = ci.hi;
    row.ci_lo = ci.lo / row.normal_tail;
    row.ci_hi = ci.hi / row.normal_tail;
    row.low_count = dr * row.normal_tail < 10.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

MillsReport mills_check(double c, const std::vector<std::int64_t>& n_grid) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("mills_check needs c > 0");
  MillsReport report;
  report.c = c;
  for (const auto n : n_grid) {
    if (n < 3) throw DomainError("mills_check needs n >= 3");
    MillsRow row;
    row.n = n;
    const double ln = std::log(static_cast<double>(n));
    row.x = c * std::sqrt(ln);
    row.tail = normal_tail(row.x);
    const double log_ratio = -std::log(row.tail) - std::log(row.x) - 0.5 * kLog2Pi - 0.5 * c * c * ln;
    row.ratio = std::exp(log_ratio);
    report.rows.push_back(row);
  }
  report.monotone = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (std::fabs(report.rows[i].ratio - 1.0) > std::fabs(report.rows[i - 1].ratio - 1.0)) report.monotone = false;
  }
  return report;
}

std::string_view to_string(Normalization v) noexcept {
  switch (v) {
    case Normalization::PopulationPair: return "PopulationPair";
    case Normalization::MeanSwap: return "MeanSwap";
    case Normalization::FullMoment: return "FullMoment";
    case Normalization::SigmaSwap: return "SigmaSwap";
    case Normalization::ExpectationSwap: return "ExpectationSwap";
  }
  return "PopulationPair";
}

std::string_view to_string(Tails v) noexcept {
  switch (v) {
    case Tails::Upper: return "upper";
    case Tails::Lower: return "lower";
    case Tails::Both: return "both";
  }
  return "upper";
}

Normalization parse_normalization(std::string_view s) {
  for (const auto v : {Normalization::PopulationPair, Normalization::MeanSwap, Normalization::FullMoment,
                       Normalization::SigmaSwap, Normalization::ExpectationSwap}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown normalization '" + std::string(s) + "'");
}

Tails parse_tails(std::string_view s) {
  for (const auto v : {Tails::Upper, Tails::Lower, Tails::Both}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown tails '" + std::string(s) + "' (expected upper, lower or both)");
}

std::vector<double> default_x_grid(double c, double A, std::int64_t n) {
  const double hi = c * std::sqrt(std::log(static_cast<double>(n)));
  std::vector<double> grid(13);
  for (int i = 0; i < 13; ++i) grid[static_cast<std::size_t>(i)] = -A + (hi + A) * i / 12.0;
  grid.back() = hi;
  return grid;
}

void validate(const ExperimentConfig& config) {
  if (config.n < 2) throw ConfigError("n must be >= 2");
  if (config.replications < 1) throw ConfigError("replications must be >= 1");
  if (config.center_replications < 0) throw ConfigError("center_replications must be >= 0");
  if (!(config.c > 0.0) || !std::isfinite(config.c)) throw ConfigError("c must be positive");
  if (!(config.A > 0.0) || !std::isfinite(config.A)) throw ConfigError("A must be positive");
  if (!(config.level > 0.0 && config.level < 1.0)) throw ConfigError("level must lie in (0,1)");
  config.schedule.evaluate(config.n);
  const double hi = config.c * std::sqrt(std::log(static_cast<double>(config.n)));
  const double slack = 1e-12 * std::max(1.0, std::max(hi, config.A));
  for (std::size_t i = 0; i < config.x_grid.size(); ++i) {
    const double x = config.x_grid[i];
    if (!std::isfinite(x)) throw ConfigError("x_grid values must be finite");
    if (x < -config.A - slack || x > hi + slack) {
      throw ConfigError("x_grid value " + format_shortest(x) + " outside [-A, c sqrt(log n)] = [" +
                        format_shortest(-config.A) + ", " + format_shortest(hi) + "]");
    }
    if (i > 0 && !(x > config.x_grid[i - 1])) throw ConfigError("x_grid must be strictly increasing");
  }
}

ExperimentConfig resolved(ExperimentConfig config) {
  if (config.x_grid.empty()) config.x_grid = default_x_grid(config.c, config.A, config.n);
  if (config.center_replications == 0) config.center_replications = config.replications;
  return config;
}

CenterEstimate estimate_centers(const ExperimentConfig& input, const RunOptions& options) {
  const auto config = resolved(input);
  validate(config);
  const auto trim = config.schedule.evaluate(config.n);
  const auto norm = normalizers(config.spec, trim);
  const auto reps = config.center_replications;
  std::vector<double> t(static_cast<std::size_t>(reps)), w(static_cast<std::size_t>(reps));
  for_each_sample(config.spec, config.seed, SeedDomain::Centers, config.n, reps, options.workers,
                  [&](std::int64_t r, std::span<double> x) {
                    CompensatedSum ws;
                    for (const double v : x) ws += winsorize_value(v, norm.xi_a, norm.xi_b);
                    w[static_cast<std::size_t>(r)] = ws.value() / static_cast<double>(x.size());
                    t[static_cast<std::size_t>(r)] = trimmed_mean_select(x, trim.k, trim.m);
                  });
  const auto mt = moments_of(t);
  const auto mw = moments_of(w);
  const double dr = static_cast<double>(reps);
  const double rn = std::sqrt(static_cast<double>(config.n));

  CenterEstimate c;
  c.replications = reps;
  c.mean_tn = mt.mean;
  c.se_mean_tn = std::sqrt(mt.var / dr);
  c.var_tn = mt.var;
  c.se_var_tn = std::sqrt(std::max(0.0, mt.m4 - mt.var * mt.var) / dr);
  c.mean_wbar = mw.mean;
  c.se_mean_wbar = std::sqrt(mw.var / dr);
  c.e_wbar = norm.winsor_mean;
  c.mu_n = norm.mu_n;
  c.sigma_w = norm.sigma_w;
  c.scaled_mean_gap = rn * (c.mean_tn - norm.mu_n) / norm.sigma_w;
  c.scaled_mean_gap_se = rn * c.se_mean_tn / norm.sigma_w;
  const double sd = std::sqrt(c.var_tn);
  c.scaled_sd_gap = rn * sd / norm.sigma_w - 1.0;
  c.scaled_sd_gap_se = sd > 0.0 ? rn * c.se_var_tn / (2.0 * sd * norm.sigma_w) : 0.0;
  c.scaled_wbar_gap = rn * (c.mean_wbar - norm.winsor_mean) / norm.sigma_w;
  return c;
}

std::vector<double> simulate_trimmed_means(const ExperimentConfig& input, const RunOptions& options) {
  const auto config = resolved(input);
  validate(config);
  const auto trim = config.schedule.evaluate(config.n);
  std::vector<double> t(static_cast<std::size_t>(config.replications));
  for_each_sample(config.spec, config.seed, SeedDomain::Experiment, config.n, config.replications, options.workers,
                  [&](std::int64_t r, std::span<double> x) {
                    t[static_cast<std::size_t>(r)] = trimmed_mean_select(x, trim.k, trim.m);
                  });
  return t;
}

double ks_distance_to_normal(std::span<const double> values) {
  if (values.empty()) throw EmptySampleError("ks distance of an empty sample");
  std::vector<double> z(values.begin(), values.end());
  std::sort(z.begin(), z.end());
  const double dn = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double phi = normal::cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / dn - phi, phi - static_cast<double>(i) / dn});
  }
  return d;
}

TailRatioReport tail_report(const ExperimentConfig& input, std::span<const double> trimmed_means,
                            const std::optional<CenterEstimate>& centers) {
  const auto config = resolved(input);
  validate(config);
  if (static_cast<std::int64_t>(trimmed_means.size()) != config.replications) {
    throw DomainError("tail_report: one trimmed mean per replication required");
  }
  TailRatioReport report;
  report.config = config;
  report.config_hash = config_hash(config);
  report.trim = config.schedule.evaluate(config.n);
  report.normalizers = normalizers(config.spec, report.trim);
  report.centers = centers;
  const auto& norm = report.normalizers;

  if (needs_centers(config.normalization) && !centers) {
    throw DomainError("normalization " + std::string(to_string(config.normalization)) + " needs centre estimates");
  }
  const double rn = std::sqrt(static_cast<double>(config.n));
  switch (config.normalization) {
    case Normalization::PopulationPair:
      report.center = norm.mu_n;
      report.scale = norm.sigma_w;
      break;
    case Normalization::MeanSwap:
      report.center = centers->mean_tn;
      report.scale = norm.sigma_w;
      break;
    case Normalization::FullMoment:
      report.center = centers->mean_tn;
      report.scale = rn * std::sqrt(centers->var_tn);
      break;
    case Normalization::SigmaSwap:
      report.center = norm.mu_n;
      report.scale = std::sqrt(config.spec.variance());
      break;
    case Normalization::ExpectationSwap:
      report.center = config.spec.mean();
      report.scale = norm.sigma_w;
      break;
  }
  if (!(report.scale > 0.0) || !std::isfinite(report.scale)) {
    throw DegenerateWindowError("normalizing scale is zero or non-finite");
  }

  std::vector<double> z(trimmed_means.size());
  for (std::size_t r = 0; r < z.size(); ++r) z[r] = rn * (trimmed_means[r] - report.center) / report.scale;
  std::sort(z.begin(), z.end());

  if (config.tails != Tails::Lower) report.upper = tail_rows(config.x_grid, z, true, config.level);
  if (config.tails != Tails::Upper) report.lower = tail_rows(config.x_grid, z, false, config.level);
  report.ks_distance = ks_distance_to_normal(z);
  return report;
}

TailRatioReport run_experiment(const ExperimentConfig& input, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto config = resolved(input);
  validate(config);
  // Fails on a degenerate window before any sampling.
  normalizers(config.spec, config.schedule.evaluate(config.n));
  if (config.normalization == Normalization::SigmaSwap) config.spec.variance();
  if (config.normalization == Normalization::ExpectationSwap) config.spec.mean();

  std::optional<CenterEstimate> centers;
  if (needs_centers(config.normalization)) centers = estimate_centers(config, options);
  const auto t = simulate_trimmed_means(config, options);
  auto report = tail_report(config, t, centers);
  report.workers = resolve_workers(options.workers);
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

AuditReport decomposition_audit(const ExperimentConfig& input, const std::vector<double>& delta_grid,
                                const RunOptions& options) {
  const auto config = resolved(input);
  validate(config);
  const auto trim = config.schedule.evaluate(config.n);
  const auto norm = normalizers(config.spec, trim);
  const auto reps = config.replications;
  std::vector<double> residual(static_cast<std::size_t>(reps)), gap(residual.size()), scaled(residual.size());
  const double rn = std::sqrt(static_cast<double>(config.n));
  for_each_sample(config.spec, config.seed, SeedDomain::Audit, config.n, reps, options.workers,
                  [&](std::int64_t r, std::span<double> x) {
                    const SortedSample sorted(std::vector<double>(x.begin(), x.end()));
                    const auto d = decompose(sorted, norm);
                    const auto i = static_cast<std::size_t>(r);
                    residual[i] = d.relative_residual;
                    gap[i] = d.form_gap;
                    scaled[i] = rn * std::fabs(d.r_n) / norm.sigma_w;
                  });
  AuditReport report;
  report.replications = reps;
  report.trim = trim;
  report.max_relative_residual = *std::max_element(residual.begin(), residual.end());
  report.max_form_gap = *std::max_element(gap.begin(), gap.end());
  for (const double delta : delta_grid) {
    AuditRow row;
    row.delta = delta;
    row.count = std::count_if(scaled.begin(), scaled.end(), [delta](double s) { return s > delta; });
    row.p_hat = static_cast<double>(row.count) / static_cast<double>(reps);
    report.rows.push_back(row);
  }
  if (!(report.max_relative_residual <= kIdentityTolerance)) {
    throw ConsistencyError("decomposition identity residual " + format_shortest(report.max_relative_residual) +
                           " exceeds " + format_shortest(kIdentityTolerance));
  }
  return report;
}

namespace {

double check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  return normal::quantile(0.5 * (1.0 + level));
}

void attach_condition(ExpectationInterval& ci, const TrimmingSchedule& schedule, double p) {
  ci.condition = check_c_an2(schedule, p, default_n_grid());
  ci.justified = ci.condition.verdict == Verdict::Consistent;
  if (!ci.justified) {
    ci.warning = "c_an2 is " + std::string(to_string(ci.condition.verdict)) + " at p=" + format_shortest(p) +
                 "; replacing mu_n by E X_1 is not theoretically justified";
  }
}

}  // namespace

ExpectationInterval ci_expectation(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n,
                                   double level, std::uint64_t seed, double p) {
  ExpectationInterval ci;
  ci.mode = "spec";
  ci.level = level;
  ci.z = check_level(level);
  ci.trim = schedule.evaluate(n);
  ci.sigma = normalizers(spec, ci.trim).sigma_w;
  std::vector<double> x(static_cast<std::size_t>(n));
  spec.sample_into(Substream(seed, SeedDomain::Interval, 0), x);
  ci.t_n = trimmed_mean(SortedSample(std::move(x)), ci.trim.k, ci.trim.m);
  ci.half_width = ci.z * ci.sigma / std::sqrt(static_cast<double>(n));
  ci.lo = ci.t_n - ci.half_width;
  ci.hi = ci.t_n + ci.half_width;
  attach_condition(ci, schedule, p);
  return ci;
}

ExpectationInterval ci_expectation(std::span<const double> data, const TrimmingSchedule& schedule, double level,
                                   double p) {
  ExpectationInterval ci;
  ci.mode = "data";
  ci.level = level;
  ci.z = check_level(level);
  const SortedSample sorted(data);
  const auto n = sorted.size();
  ci.trim = schedule.evaluate(n);
  ci.t_n = trimmed_mean(sorted, ci.trim.k, ci.trim.m);
  const double lo = ci.trim.k > 0 ? sorted.order(ci.trim.k) : -std::numeric_limits<double>::infinity();
  const double hi = ci.trim.m > 0 ? sorted.order(n - ci.trim.m) : std::numeric_limits<double>::infinity();
  const auto w = winsorize(sorted.values(), lo, hi);
  const double mean = mean_of(w);
  CompensatedSum ss;
  for (const double v : w) ss += (v - mean) * (v - mean);
  ci.sigma = std::sqrt(ss.value() / static_cast<double>(n));
  if (!(ci.sigma > 0.0)) throw DegenerateWindowError("sample Winsorized standard deviation is zero");
  ci.half_width = ci.z * ci.sigma / std::sqrt(static_cast<double>(n));
  ci.lo = ci.t_n - ci.half_width;
  ci.hi = ci.t_n + ci.half_width;
  attach_condition(ci, schedule, p);
  return ci;
}

CoverageReport coverage_experiment(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n,
                                   double level, std::int64_t trials, std::uint64_t seed,
                                   const RunOptions& options) {
  if (trials < 1) throw DomainError("coverage needs trials >= 1");
  const double z = check_level(level);
  CoverageReport report;
  report.trials = trials;
  report.trim = schedule.evaluate(n);
  report.target = spec.mean();
  const auto norm = normalizers(spec, report.trim);
  const double rn = std::sqrt(static_cast<double>(n));
  report.half_width = z * norm.sigma_w / rn;
  std::vector<double> gap(static_cast<std::size_t>(trials));
  for_each_sample(spec, seed, SeedDomain::Coverage, n, trials, options.workers, [&](std::int64_t r, std::span<double> x) {
    gap[static_cast<std::size_t>(r)] = trimmed_mean_select(x, report.trim.k, report.trim.m) - report.target;
  });
  report.covered = std::count_if(gap.begin(), gap.end(), [&](double g) { return std::fabs(g) <= report.half_width; });
  report.coverage = static_cast<double>(report.covered) / static_cast<double>(trials);
  const auto ci = clopper_pearson(report.covered, trials, 0.99);
  report.ci_lo = ci.lo;
  report.ci_hi = ci.hi;
  report.mean_center_gap = rn * mean_of(gap) / norm.sigma_w;
  return report;
}

}  // namespace trimlab
