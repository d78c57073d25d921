#include "trimlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trimlab/error.hpp"
#include "trimlab/format.hpp"
#include "trimlab/functionals.hpp"

namespace trimlab {
namespace {

constexpr double kPolynomialSlope = -0.02;

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Fit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / m);
  return f;
}

// Fits of log y against log n and against log log n.
struct DecayFits {
  Fit power;
  Fit log_power;
  bool power_preferred() const { return power.residual < log_power.residual - 1e-12; }
};

DecayFits decay_fits(const std::vector<std::int64_t>& n, const std::vector<double>& y) {
  std::vector<double> ln, lln, ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double l = std::log(static_cast<double>(n[i]));
    ln.push_back(l);
    lln.push_back(std::log(l));
    ly.push_back(std::log(y[i]));
  }
  return {least_squares(ln, ly), least_squares(lln, ly)};
}

void validate_grid(const std::vector<std::int64_t>& grid) {
  if (grid.empty()) throw DomainError("n-grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 3) throw DomainError("n-grid values must be >= 3");
    if (i > 0 && grid[i] <= grid[i - 1]) throw DomainError("n-grid must be strictly increasing");
  }
}

// At least 5 points spanning at least 3 decades.
bool grid_adequate(const std::vector<std::int64_t>& grid) {
  return grid.size() >= 5 && static_cast<double>(grid.back()) >= 1000.0 * static_cast<double>(grid.front());
}

// Fits use the top half of the grid.
std::size_t tail_start(std::size_t size) { return size / 2; }

Verdict combine(const std::vector<ConditionReport>& parts) {
  bool inconclusive = false;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::Inconsistent) return Verdict::Inconsistent;
    if (p.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Consistent;
}

Verdict worst(Verdict x, Verdict y) {
  if (x == Verdict::Inconsistent || y == Verdict::Inconsistent) return Verdict::Inconsistent;
  if (x == Verdict::Inconclusive || y == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Consistent;
}

std::string grid_note() { return "grid needs >= 5 points spanning >= 3 decades"; }

ConditionReport c_kn_part(const std::vector<TrimPoint>& points, const std::vector<std::int64_t>& grid) {
  ConditionReport r;
  r.condition = "c_kn";
  r.n_grid = grid;
  for (const auto& pt : points) {
    const auto km = std::min(pt.k, pt.m);
    const double v = km > 0 ? std::log(static_cast<double>(pt.n)) / static_cast<double>(km)
                            : std::numeric_limits<double>::infinity();
    r.rows.push_back({pt.n, {{"k_n", double(pt.k)}, {"m_n", double(pt.m)}, {"log_n_over_min_km", v}}});
  }
  if (!grid_adequate(grid)) {
    r.note = grid_note();
    return r;
  }
  std::vector<std::int64_t> n;
  std::vector<double> y;
  for (std::size_t i = tail_start(points.size()); i < points.size(); ++i) {
    const double v = r.rows[i].values[2].second;
    if (!std::isfinite(v)) {
      r.verdict = Verdict::Inconsistent;
      r.note = "k_n ^ m_n = 0 on the grid";
      return r;
    }
    n.push_back(points[i].n);
    y.push_back(v);
  }
  const auto fits = decay_fits(n, y);
  r.model = "log_n";
  r.exponent = -fits.power.slope;
  r.residual = fits.power.residual;
  r.threshold = 0.05;
  if (r.residual > kFitResidualThreshold) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = r.exponent > r.threshold ? Verdict::Consistent : Verdict::Inconsistent;
  }
  return r;
}

std::vector<double> max_fraction(const std::vector<TrimPoint>& points) {
  std::vector<double> v;
  for (const auto& pt : points) v.push_back(std::max(pt.a, pt.b));
  return v;
}

ConditionReport c_an_part(const std::vector<TrimPoint>& points, const std::vector<std::int64_t>& grid, double p) {
  ConditionReport r;
  r.condition = "c_an";
  r.n_grid = grid;
  r.threshold = 2.0 * p / (p - 2.0);
  const auto frac = max_fraction(points);
  for (std::size_t i = 0; i < points.size(); ++i) r.rows.push_back({points[i].n, {{"a_n_or_b_n", frac[i]}}});
  if (!grid_adequate(grid)) {
    r.note = grid_note();
    return r;
  }
  std::vector<std::int64_t> n;
  std::vector<double> y;
  for (std::size_t i = tail_start(points.size()); i < points.size(); ++i) {
    if (frac[i] == 0.0) {
      r.verdict = Verdict::Consistent;
      r.note = "untrimmed on the grid";
      return r;
    }
    n.push_back(points[i].n);
    y.push_back(frac[i]);
  }
  const auto fits = decay_fits(n, y);
  if (fits.power_preferred() && fits.power.slope < kPolynomialSlope) {
    r.model = "log_n";
    r.exponent = -fits.power.slope;
    r.residual = fits.power.residual;
    r.note = "polynomial decay dominates every log power";
    r.verdict = r.residual > kFitResidualThreshold ? Verdict::Inconclusive : Verdict::Consistent;
    return r;
  }
  r.model = "log_log_n";
  r.exponent = -fits.log_power.slope;
  r.residual = fits.log_power.residual;
  if (r.residual > kFitResidualThreshold) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = r.exponent > r.threshold ? Verdict::Consistent : Verdict::Inconsistent;
  }
  return r;
}

std::vector<TrimPoint> evaluate_grid(const TrimmingSchedule& schedule, const std::vector<std::int64_t>& grid) {
  validate_grid(grid);
  std::vector<TrimPoint> points;
  for (const auto n : grid) points.push_back(schedule.evaluate(n));
  return points;
}

constexpr std::int64_t kMinLogPowerCount = 20;
constexpr std::int64_t kMaxGridN = 1000000000000000000;

std::int64_t min_count(const TrimmingSchedule& schedule, std::int64_t n) {
  const auto pt = schedule.evaluate(n);
  return std::min(pt.k, pt.m);
}

// Log-power counts sit at the ceiling floor of 1 on moderate n. The grid then
// keeps the points with counts >= kMinLogPowerCount and continues by decades.
std::vector<std::int64_t> usable_grid(const TrimmingSchedule& schedule, const std::vector<std::int64_t>& grid,
                                      std::string& note) {
  validate_grid(grid);
  if (!std::holds_alternative<LogPower>(schedule.rule()) || !grid_adequate(grid)) return grid;
  bool pinned = false;
  for (std::size_t i = tail_start(grid.size()); i < grid.size(); ++i)
    pinned = pinned || min_count(schedule, grid[i]) < kMinLogPowerCount;
  if (!pinned) return grid;
  std::vector<std::int64_t> out;
  for (const auto n : grid)
    if (min_count(schedule, n) >= kMinLogPowerCount) out.push_back(n);
  std::int64_t n = grid.back();
  while (n <= kMaxGridN / 10 && !(out.size() >= 7 && grid_adequate(out))) {
    n *= 10;
    if (min_count(schedule, n) >= kMinLogPowerCount) out.push_back(n);
  }
  if (out.size() < 2) return grid;
  note = "grid moved to n in [" + std::to_string(out.front()) + ", " + std::to_string(out.back()) +
         "] to keep k_n ^ m_n >= " + std::to_string(kMinLogPowerCount);
  return out;
}

struct SeriesVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string model;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

SeriesVerdict decay_verdict(const std::vector<std::int64_t>& n, const std::vector<double>& values,
                            const std::vector<double>& eps_grid) {
  SeriesVerdict out;
  if (n.size() < 2) {
    out.note = "fewer than 2 usable grid points";
    return out;
  }
  std::size_t zeros = 0;
  std::vector<double> mag;
  for (const double v : values) {
    zeros += v == 0.0;
    mag.push_back(std::fabs(v));
  }
  if (zeros == values.size()) {
    out.verdict = Verdict::Consistent;
    out.note = "identically zero";
    return out;
  }
  if (zeros > 0) {
    out.note = "mixed zero and nonzero values";
    return out;
  }
  const auto fits = decay_fits(n, mag);
  if (fits.power.residual <= kFitResidualThreshold && fits.power.slope < kPolynomialSlope) {
    out.verdict = Verdict::Consistent;
    out.model = "log_n";
    out.exponent = -fits.power.slope;
    out.residual = fits.power.residual;
    return out;
  }
  out.model = "log_log_n";
  out.exponent = -fits.log_power.slope;
  out.residual = fits.log_power.residual;
  if (out.residual > kFitResidualThreshold) return out;
  out.verdict = Verdict::Inconsistent;
  for (const double eps : eps_grid) {
    if (out.exponent >= 1.0 + eps) {
      out.verdict = Verdict::Consistent;
      std::ostringstream note;
      note << "decays at least like (log n)^-(1+" << format_shortest(eps) << ")";
      out.note = note.str();
    }
  }
  return out;
}

double shifted_quantile_gap(const DistributionSpec& spec, double base, double shift) {
  const double arg = base + shift;
  if (!(arg > 0.0 && arg < 1.0) || !(base > 0.0 && base < 1.0)) {
    throw RangeError("shifted quantile argument outside (0,1): n too small for this t");
  }
  return spec.quantile(arg) - spec.quantile(base);
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<std::int64_t> default_n_grid() { return {1000, 3000, 10000, 30000, 100000, 1000000, 10000000}; }

ConditionReport check_intermediate(const TrimmingSchedule& schedule, double p, const std::vector<std::int64_t>& n_grid) {
  if (!(p > 2.0)) throw DomainError("check_intermediate needs p > 2");
  std::string moved;
  const auto grid = usable_grid(schedule, n_grid, moved);
  const auto points = evaluate_grid(schedule, grid);
  ConditionReport r;
  r.condition = "intermediate";
  r.n_grid = grid;
  r.threshold = 2.0 * p / (p - 2.0);
  r.parts.push_back(c_kn_part(points, grid));
  r.parts.push_back(c_an_part(points, grid, p));
  r.verdict = combine(r.parts);
  r.note = grid_adequate(grid) ? moved : grid_note();
  return r;
}

ConditionReport check_c_an2(const TrimmingSchedule& schedule, double p, const std::vector<std::int64_t>& n_grid) {
  if (!(p > 1.0)) throw DomainError("check_c_an2 needs p > 1");
  std::string moved;
  const auto grid = usable_grid(schedule, n_grid, moved);
  const auto points = evaluate_grid(schedule, grid);
  ConditionReport r;
  r.condition = "c_an2";
  r.n_grid = grid;
  r.note = moved;
  r.threshold = p / (2.0 * (p - 1.0));
  const auto frac = max_fraction(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double n = static_cast<double>(points[i].n);
    r.rows.push_back({points[i].n,
                      {{"a_n_or_b_n", frac[i]}, {"scaled", frac[i] * std::pow(n * std::log(n), r.threshold)}}});
  }
  if (!grid_adequate(grid)) {
    r.note = grid_note();
    return r;
  }
  std::vector<std::int64_t> n;
  std::vector<double> y;
  for (std::size_t i = tail_start(points.size()); i < points.size(); ++i) {
    if (frac[i] == 0.0) {
      r.verdict = Verdict::Consistent;
      r.note = "untrimmed on the grid";
      return r;
    }
    n.push_back(points[i].n);
    y.push_back(frac[i]);
  }
  const auto fits = decay_fits(n, y);
  if (!fits.power_preferred()) {
    r.model = "log_log_n";
    r.exponent = -fits.log_power.slope;
    r.residual = fits.log_power.residual;
    r.verdict = r.residual > kFitResidualThreshold ? Verdict::Inconclusive : Verdict::Inconsistent;
    r.note = "decays slower than any power of n";
    return r;
  }
  r.model = "log_n";
  r.exponent = -fits.power.slope;
  r.residual = fits.power.residual;
  if (r.residual > kFitResidualThreshold || std::fabs(r.exponent - r.threshold) < 0.01) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = r.exponent > r.threshold ? Verdict::Consistent : Verdict::Inconsistent;
  }
  return r;
}

ConditionReport check_heavy(const TrimmingSchedule& schedule, const std::vector<std::int64_t>& n_grid) {
  const auto points = evaluate_grid(schedule, n_grid);
  ConditionReport r;
  r.condition = "abc";
  r.n_grid = n_grid;
  for (const auto& pt : points) r.rows.push_back({pt.n, {{"a_n", pt.a}, {"one_minus_b_n", 1.0 - pt.b}}});
  if (!grid_adequate(n_grid)) {
    r.note = grid_note();
    return r;
  }
  std::vector<std::int64_t> n;
  std::vector<double> a, b;
  for (std::size_t i = tail_start(points.size()); i < points.size(); ++i) {
    n.push_back(points[i].n);
    a.push_back(points[i].a);
    b.push_back(points[i].b);
  }
  const auto decays = [&n](const std::vector<double>& v) {
    if (std::any_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) return true;
    const auto fits = decay_fits(n, v);
    return fits.power.slope < kPolynomialSlope || fits.log_power.slope < -0.5;
  };
  const double a1 = decays(a) ? 0.0 : *std::min_element(a.begin(), a.end());
  const double a2 = *std::max_element(a.begin(), a.end());
  const double b1 = 1.0 - *std::max_element(b.begin(), b.end());
  const double b2 = decays(b) ? 1.0 : 1.0 - *std::min_element(b.begin(), b.end());
  std::ostringstream note;
  note << "a_1=" << format_shortest(a1) << " a_2=" << format_shortest(a2) << " b_1=" << format_shortest(b1)
       << " b_2=" << format_shortest(b2);
  r.note = note.str();
  r.verdict = (a1 > 0.0 && b2 < 1.0 && a2 < b1) ? Verdict::Consistent : Verdict::Inconsistent;
  return r;
}

SmoothnessGH smoothness_GH(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n) {
  if (!std::isfinite(t)) throw DomainError("t must be finite");
  const auto pt = schedule.evaluate(n);
  if (t == 0.0) return {};
  const double ln = std::log(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  SmoothnessGH out;
  out.g = shifted_quantile_gap(spec, pt.a, t * std::sqrt(pt.a * ln / dn));
  out.h = shifted_quantile_gap(spec, 1.0 - pt.b, t * std::sqrt(pt.b * ln / dn));
  return out;
}

ConditionReport check_cgh(const DistributionSpec& spec, const TrimmingSchedule& schedule,
                          const std::vector<double>& t_set, const std::vector<std::int64_t>& n_grid,
                          const std::vector<double>& eps_grid) {
  validate_grid(n_grid);
  if (t_set.empty()) throw DomainError("t_set is empty");
  ConditionReport r;
  r.condition = "cgh";
  r.n_grid = n_grid;
  for (const double t : t_set) {
    ConditionReport part;
    part.condition = "cgh(t=" + format_shortest(t) + ")";
    part.n_grid = n_grid;
    std::vector<std::int64_t> n;
    std::vector<double> g, h;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      try {
        const auto gh = smoothness_GH(spec, schedule, t, n_grid[i]);
        part.rows.push_back({n_grid[i], {{"G", gh.g}, {"H", gh.h}}});
        if (i >= tail_start(n_grid.size())) {
          n.push_back(n_grid[i]);
          g.push_back(gh.g);
          h.push_back(gh.h);
        }
      } catch (const RangeError&) {
        ++skipped;
      }
    }
    if (!grid_adequate(n_grid)) {
      part.note = grid_note();
      r.parts.push_back(std::move(part));
      continue;
    }
    const auto vg = decay_verdict(n, g, eps_grid);
    const auto vh = decay_verdict(n, h, eps_grid);
    part.verdict = worst(vg.verdict, vh.verdict);
    const auto& worse = (vg.verdict == part.verdict) ? vg : vh;
    part.model = worse.model;
    part.exponent = worse.exponent;
    part.residual = worse.residual;
    part.threshold = 1.0 + eps_grid.front();
    part.note = "G: " + std::string(to_string(vg.verdict)) + (vg.note.empty() ? "" : " (" + vg.note + ")") +
                "; H: " + std::string(to_string(vh.verdict)) + (vh.note.empty() ? "" : " (" + vh.note + ")");
    if (skipped > 0) part.note += "; " + std::to_string(skipped) + " grid points skipped: n too small for this t";
    r.parts.push_back(std::move(part));
  }
  r.verdict = combine(r.parts);
  if (!grid_adequate(n_grid)) r.note = grid_note();
  return r;
}

namespace {

double psi(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n, bool upper) {
  if (!std::isfinite(t)) throw DomainError("t must be finite");
  const auto pt = schedule.evaluate(n);
  const double frac = upper ? pt.b : pt.a;
  if (!(frac > 0.0 && frac < 1.0)) throw DomainError("psi needs a trim fraction in (0,1)");
  const double dn = static_cast<double>(n);
  const double bound = 0.5 * std::sqrt(frac * dn);
  const double tc = std::clamp(t, -bound, bound);
  const double sigma_w = normalizers(spec, pt).sigma_w;
  if (tc == 0.0) return 0.0;
  const double base = upper ? 1.0 - frac : frac;
  return std::sqrt(frac) / sigma_w * shifted_quantile_gap(spec, base, tc * std::sqrt(frac / dn));
}

}  // namespace

double psi_1n(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n) {
  return psi(spec, schedule, t, n, false);
}

double psi_2n(const DistributionSpec& spec, const TrimmingSchedule& schedule, double t, std::int64_t n) {
  return psi(spec, schedule, t, n, true);
}

}  // namespace trimlab
