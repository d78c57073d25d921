#include "trimlab/functionals.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "trimlab/error.hpp"
#include "trimlab/normal.hpp"
#include "trimlab/quadrature.hpp"
#include "trimlab/summation.hpp"

namespace trimlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void check_window(double u, double v) {
  if (!(u >= 0.0 && v >= 0.0 && u < 1.0 - v && 1.0 - v <= 1.0)) {
    throw DomainError("window (u, 1-v) must satisfy 0 <= u < 1-v <= 1");
  }
}

// Integrating F^{-1} (or its square) up to an unbounded end of the support
// needs the matching absolute moment.
void check_endpoint_moment(const DistributionSpec& spec, double lo, double hi, double p) {
  const bool open_lo = lo == 0.0 && !spec.bounded_below();
  const bool open_hi = hi == 1.0 && !spec.bounded_above();
  if ((open_lo || open_hi) && !std::isfinite(spec.abs_moment(p))) {
    throw MomentError("window reaches an unbounded end of the support but E|X|^" +
                      std::to_string(static_cast<int>(p)) + " is infinite");
  }
}

double draw(const DistributionSpec& spec, double s) {
  return spec.visit([s](const auto& d) { return d.draw(s); });
}

// Location-scale representation F^{-1} = loc + scale * G^{-1} for families
// whose standard member has closed-form quantile integrals.
struct Standardized {
  enum class Kind { Uniform, Normal, Exponential, Pareto, Cauchy } kind;
  double loc, scale, theta = 0.0;
};

std::optional<Standardized> standardize(const DistributionSpec& spec) {
  using K = Standardized::Kind;
  if (const auto* d = std::get_if<Uniform>(&spec.family())) return Standardized{K::Uniform, d->lo, d->hi - d->lo};
  if (const auto* d = std::get_if<Normal>(&spec.family())) return Standardized{K::Normal, d->mean, d->sd};
  if (const auto* d = std::get_if<Exponential>(&spec.family()))
    return Standardized{K::Exponential, 0.0, 1.0 / d->rate};
  if (const auto* d = std::get_if<Pareto>(&spec.family()))
    return Standardized{K::Pareto, d->location, d->scale, d->tail_index};
  if (const auto* d = std::get_if<Cauchy>(&spec.family())) return Standardized{K::Cauchy, d->location, d->scale};
  return std::nullopt;
}

// int_t0^t1 t^(-alpha) dt for 0 <= t0 <= t1.
double power_integral(double t0, double t1, double alpha) {
  if (t0 == 0.0 && alpha >= 1.0) throw MomentError("pareto: quantile integral diverges at 1");
  if (alpha == 1.0) return std::log(t1) - std::log(t0);
  const double e = 1.0 - alpha;
  return (std::pow(t1, e) - std::pow(t0, e)) / e;
}

double z_pdf(double z) { return std::isfinite(z) ? normal::pdf(z) : 0.0; }
double z_zpdf(double z) { return std::isfinite(z) ? z * normal::pdf(z) : 0.0; }
double t_log_t(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }
double t_log2_t(double t) { return t > 0.0 ? t * std::log(t) * std::log(t) : 0.0; }

double cauchy_log_sin(double s) { return std::log(std::sin(kPi * std::min(s, 1.0 - s))); }
double cauchy_std(double s) { return Cauchy{0.0, 1.0}.draw(s); }

// int_lo^hi G^{-1}(s) ds and int_lo^hi (G^{-1}(s))^2 ds for the standard member.
struct StdMoments {
  double first, second;
};

StdMoments standardized_moments(const Standardized& st, double lo, double hi) {
  using K = Standardized::Kind;
  switch (st.kind) {
    case K::Uniform:
      return {(hi * hi - lo * lo) / 2.0, (hi * hi * hi - lo * lo * lo) / 3.0};
    case K::Normal: {
      const double zl = normal::quantile(lo), zh = normal::quantile(hi);
      return {z_pdf(zl) - z_pdf(zh), (hi - lo) + z_zpdf(zl) - z_zpdf(zh)};
    }
    case K::Exponential: {
      // s = 1 - t; int -ln t dt = t - t ln t, int ln^2 t dt = t ln^2 t - 2 t ln t + 2 t.
      const double tl = 1.0 - lo, th = 1.0 - hi;
      const double first = (tl - t_log_t(tl)) - (th - t_log_t(th));
      const double second = (t_log2_t(tl) - 2 * t_log_t(tl) + 2 * tl) - (t_log2_t(th) - 2 * t_log_t(th) + 2 * th);
      return {first, second};
    }
    case K::Pareto: {
      const double tl = 1.0 - lo, th = 1.0 - hi;
      return {power_integral(th, tl, 1.0 / st.theta), power_integral(th, tl, 2.0 / st.theta)};
    }
    case K::Cauchy: {
      if (lo == 0.0 || hi == 1.0) throw MomentError("cauchy: quantile integral diverges at the support ends");
      const double first = -(cauchy_log_sin(hi) - cauchy_log_sin(lo)) / kPi;
      const double second = (cauchy_std(hi) - cauchy_std(lo)) / kPi - (hi - lo);
      return {first, second};
    }
  }
  return {0.0, 0.0};
}

struct MixtureOverlap {
  double len0, len1;
};

MixtureOverlap overlap(const TwoPointMixture& d, double lo, double hi) {
  return {std::max(0.0, std::min(hi, d.w0) - lo), std::max(0.0, hi - std::max(lo, d.w0))};
}

double quadrature_first(const DistributionSpec& spec, double lo, double hi) {
  quad::Options opts;
  opts.abs_tol = 1e-11;
  const auto r = quad::integrate([&spec](double s) { return draw(spec, s); }, lo, hi, opts);
  if (!r.converged) throw MomentError("quantile integral did not converge");
  return r.value;
}

double quadrature_centered_second(const DistributionSpec& spec, double lo, double hi, double c) {
  quad::Options opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-12;
  const auto r = quad::integrate(
      [&spec, c](double s) {
        const double d = draw(spec, s) - c;
        return d * d;
      },
      lo, hi, opts);
  if (!r.converged) throw MomentError("quantile second-moment integral did not converge");
  return r.value;
}

// int_lo^hi F^{-1}.
double first_integral(const DistributionSpec& spec, double lo, double hi, bool force_quadrature) {
  if (lo == hi) return 0.0;
  if (const auto* d = std::get_if<TwoPointMixture>(&spec.family())) {
    const auto ov = overlap(*d, lo, hi);
    return d->x0 * ov.len0 + d->x1 * ov.len1;
  }
  if (!force_quadrature) {
    if (const auto st = standardize(spec)) {
      return st->loc * (hi - lo) + st->scale * standardized_moments(*st, lo, hi).first;
    }
  }
  return quadrature_first(spec, lo, hi);
}

// int_lo^hi (F^{-1} - c)^2.
double centered_second(const DistributionSpec& spec, double lo, double hi, double c, bool force_quadrature) {
  if (lo == hi) return 0.0;
  if (const auto* d = std::get_if<TwoPointMixture>(&spec.family())) {
    const auto ov = overlap(*d, lo, hi);
    return ov.len0 * (d->x0 - c) * (d->x0 - c) + ov.len1 * (d->x1 - c) * (d->x1 - c);
  }
  if (!force_quadrature) {
    if (const auto st = standardize(spec)) {
      if (st->kind == Standardized::Kind::Uniform) {
        const double cs = (c - st->loc) / st->scale;
        const double hh = hi - cs, ll = lo - cs;
        return st->scale * st->scale * (hh * hh * hh - ll * ll * ll) / 3.0;
      }
      const auto m = standardized_moments(*st, lo, hi);
      const double cs = (c - st->loc) / st->scale;
      const double v = m.second - 2.0 * cs * m.first + cs * cs * (hi - lo);
      return st->scale * st->scale * std::max(0.0, v);
    }
  }
  return quadrature_centered_second(spec, lo, hi, c);
}

double lower_xi(const DistributionSpec& spec, double a) { return spec.quantile(a); }

double upper_xi(const DistributionSpec& spec, double b) {
  if (b > 0.0) return spec.quantile(1.0 - b);
  return spec.bounded_above() ? spec.quantile(1.0) : kInf;
}

WinsorizedMoments winsorized_impl(const DistributionSpec& spec, double a, double b, bool quadrature,
                                  bool allow_degenerate) {
  check_window(a, b);
  const double lo = a, hi = 1.0 - b;
  check_endpoint_moment(spec, lo, hi, 2.0);
  WinsorizedMoments out;
  out.xi_lo = lower_xi(spec, a);
  out.xi_hi = upper_xi(spec, b);
  if (out.xi_lo == out.xi_hi) {
    if (!allow_degenerate) throw DegenerateWindowError("Winsorization window collapses: xi_a == xi_{1-b}");
    out.mean = out.xi_lo;
    out.var = 0.0;
    return out;
  }
  const double mu = first_integral(spec, lo, hi, quadrature);
  out.mean = (a > 0 ? a * out.xi_lo : 0.0) + mu + (b > 0 ? b * out.xi_hi : 0.0);
  double var = centered_second(spec, lo, hi, out.mean, quadrature);
  if (a > 0) var += a * (out.xi_lo - out.mean) * (out.xi_lo - out.mean);
  if (b > 0) var += b * (out.xi_hi - out.mean) * (out.xi_hi - out.mean);
  out.var = std::max(0.0, var);
  return out;
}

}  // namespace

double mu_functional(const DistributionSpec& spec, double u, double v) {
  check_window(u, v);
  check_endpoint_moment(spec, u, 1.0 - v, 1.0);
  return first_integral(spec, u, 1.0 - v, false);
}

double mu_functional_quadrature(const DistributionSpec& spec, double u, double v) {
  check_window(u, v);
  check_endpoint_moment(spec, u, 1.0 - v, 1.0);
  return first_integral(spec, u, 1.0 - v, true);
}

WinsorizedMoments winsorized_moments(const DistributionSpec& spec, double a, double b) {
  return winsorized_impl(spec, a, b, false, false);
}

WinsorizedMoments winsorized_moments_quadrature(const DistributionSpec& spec, double a, double b) {
  return winsorized_impl(spec, a, b, true, false);
}

double sigma2_functional(const DistributionSpec& spec, double u, double v) {
  check_window(u, v);
  if (const auto* d = std::get_if<TwoPointMixture>(&spec.family())) {
    return sigma2_stieltjes(StepQuantile::of(*d), u, v);
  }
  return winsorized_impl(spec, u, v, false, true).var;
}

PopulationFunctionals population_functionals(const DistributionSpec& spec, double u, double v) {
  PopulationFunctionals out;
  out.u = u;
  out.v = v;
  out.mu = mu_functional(spec, u, v);
  out.sigma2 = sigma2_functional(spec, u, v);
  const auto w = winsorized_impl(spec, u, v, false, true);
  out.winsor_mean = w.mean;
  out.winsor_var = w.var;
  return out;
}

StepQuantile::StepQuantile(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (values_.size() != breaks_.size() + 1) throw DomainError("step quantile: need one more value than breaks");
  for (std::size_t j = 0; j < breaks_.size(); ++j) {
    if (!(breaks_[j] > 0.0 && breaks_[j] < 1.0) || (j > 0 && !(breaks_[j] > breaks_[j - 1])))
      throw DomainError("step quantile: breaks must increase strictly inside (0,1)");
  }
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] < values_[j - 1]) throw DomainError("step quantile: values must be nondecreasing");
  }
}

StepQuantile StepQuantile::of(const TwoPointMixture& d) {
  if (d.w0 <= 0.0) return StepQuantile({}, {d.x1});
  if (d.w1 <= 0.0) return StepQuantile({}, {d.x0});
  return StepQuantile({d.w0}, {d.x0, d.x1});
}

StepQuantile StepQuantile::winsorized_approximation(const DistributionSpec& spec, double a, double b,
                                                    std::size_t cells) {
  const double lo = a, hi = 1.0 - b;
  if (!(lo > 0.0 && lo < hi && hi < 1.0) || cells == 0)
    throw DomainError("winsorized_approximation: need 0 < a < 1-b < 1 and cells >= 1");
  // 3-point Gauss-Legendre cell averages.
  constexpr double node = 0.77459666924148337704;  // sqrt(3/5)
  constexpr double w_mid = 8.0 / 18.0, w_side = 5.0 / 18.0;
  std::vector<double> breaks(cells + 1), values(cells + 2);
  const double h = (hi - lo) / static_cast<double>(cells);
  for (std::size_t j = 0; j <= cells; ++j) breaks[j] = lo + h * static_cast<double>(j);
  breaks[cells] = hi;
  values[0] = spec.quantile(lo);
  for (std::size_t j = 0; j < cells; ++j) {
    const double c = 0.5 * (breaks[j] + breaks[j + 1]);
    const double r = 0.5 * (breaks[j + 1] - breaks[j]);
    values[j + 1] = w_side * draw(spec, c - node * r) + w_mid * draw(spec, c) + w_side * draw(spec, c + node * r);
  }
  values[cells + 1] = spec.quantile(hi);
  // Cell averages can dip below the clamped endpoint values only through
  // rounding; keep the function monotone.
  for (std::size_t j = 1; j < values.size(); ++j) values[j] = std::max(values[j], values[j - 1]);
  return StepQuantile(std::move(breaks), std::move(values));
}

double StepQuantile::operator()(double s) const {
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), s);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double sigma2_stieltjes(const StepQuantile& q, double u, double v) {
  check_window(u, v);
  const auto breaks = q.breaks();
  const auto values = q.values();
  const double hi = 1.0 - v;
  // sum_{j,l} (p_j ^ p_l - p_j p_l) J_j J_l over atoms p in [u, 1-v):
  // diagonal p(1-p) J^2 plus twice sum_{j<l} p_j (1 - p_l) J_j J_l.
  CompensatedSum diag, cross;
  double prefix = 0.0;
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    const double p = breaks[j];
    if (p < u || p >= hi) continue;
    const double jump = values[j + 1] - values[j];
    if (jump == 0.0) continue;
    diag += p * (1.0 - p) * jump * jump;
    cross += (1.0 - p) * jump * prefix;
    prefix += p * jump;
  }
  return std::max(0.0, diag.value() + 2.0 * cross.value());
}

double sigma2_step_extrapolated(const DistributionSpec& spec, double a, double b, std::size_t cells) {
  const double coarse = sigma2_stieltjes(StepQuantile::winsorized_approximation(spec, a, b, cells), 0.0, 0.0);
  const double fine = sigma2_stieltjes(StepQuantile::winsorized_approximation(spec, a, b, 2 * cells), 0.0, 0.0);
  return std::max(0.0, (4.0 * fine - coarse) / 3.0);
}

namespace {

struct CacheKey {
  std::string spec;
  std::uint64_t a_bits, b_bits;
  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.spec);
    h ^= std::hash<std::uint64_t>{}(k.a_bits) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(k.b_bits) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct NormalizerCache {
  std::shared_mutex mutex;
  std::unordered_map<CacheKey, Normalizers, CacheKeyHash> entries;
};

NormalizerCache& cache() {
  static NormalizerCache instance;
  return instance;
}

}  // namespace

Normalizers normalizers(const DistributionSpec& spec, const TrimPoint& trim) {
  CacheKey key{spec.canonical(), std::bit_cast<std::uint64_t>(trim.a), std::bit_cast<std::uint64_t>(trim.b)};
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (const auto it = c.entries.find(key); it != c.entries.end()) {
      Normalizers hit = it->second;
      hit.trim = trim;
      return hit;
    }
  }
  const auto w = winsorized_moments(spec, trim.a, trim.b);
  Normalizers out;
  out.trim = trim;
  out.xi_a = w.xi_lo;
  out.xi_b = w.xi_hi;
  out.mu_n = mu_functional(spec, trim.a, trim.b);
  out.winsor_mean = (trim.a > 0 ? trim.a * out.xi_a : 0.0) + out.mu_n + (trim.b > 0 ? trim.b * out.xi_b : 0.0);
  out.sigma_w = std::sqrt(w.var);
  if (!(out.sigma_w > 0.0)) throw DegenerateWindowError("sigma_W = 0: Winsorized variable is degenerate");
  std::unique_lock lock(c.mutex);
  c.entries.emplace(std::move(key), out);
  return out;
}

Normalizers normalizers(const DistributionSpec& spec, const TrimmingSchedule& schedule, std::int64_t n) {
  return normalizers(spec, schedule.evaluate(n));
}

}  // namespace trimlab
