#include "trimlab/distributions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <limits>

#include "trimlab/error.hpp"
#include "trimlab/format.hpp"
#include "trimlab/quadrature.hpp"

namespace trimlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using boost_t = boost::math::students_t_distribution<double>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double StudentT::draw(double u) const { return boost::math::quantile(boost_t(df), u); }

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) {
  visit(Overloaded{
      [](const Uniform& d) {
        require(finite(d.lo) && finite(d.hi) && d.lo < d.hi, "uniform: need finite lo < hi");
      },
      [](const Exponential& d) { require(finite(d.rate) && d.rate > 0, "exponential: rate must be > 0"); },
      [](const Normal& d) {
        require(finite(d.mean) && finite(d.sd) && d.sd > 0, "normal: sd must be > 0");
      },
      [](const Pareto& d) {
        require(finite(d.tail_index) && d.tail_index > 0, "pareto: tail_index must be > 0");
        require(finite(d.scale) && d.scale > 0, "pareto: scale must be > 0");
        require(finite(d.location), "pareto: location must be finite");
      },
      [](const StudentT& d) { require(finite(d.df) && d.df > 0, "student_t: df must be > 0"); },
      [](const Cauchy& d) {
        require(finite(d.location) && finite(d.scale) && d.scale > 0, "cauchy: scale must be > 0");
      },
      [](const TwoPointMixture& d) {
        require(finite(d.x0) && finite(d.x1) && d.x0 < d.x1, "two_point_mixture: need x0 < x1");
        require(d.w0 >= 0 && d.w1 >= 0, "two_point_mixture: weights must be nonnegative");
        require(std::fabs(d.w0 + d.w1 - 1.0) <= 1e-12, "two_point_mixture: weights must sum to 1");
      },
  });
}

std::string_view DistributionSpec::name() const noexcept {
  return visit(Overloaded{
      [](const Uniform&) { return std::string_view("uniform"); },
      [](const Exponential&) { return std::string_view("exponential"); },
      [](const Normal&) { return std::string_view("normal"); },
      [](const Pareto&) { return std::string_view("pareto"); },
      [](const StudentT&) { return std::string_view("student_t"); },
      [](const Cauchy&) { return std::string_view("cauchy"); },
      [](const TwoPointMixture&) { return std::string_view("two_point_mixture"); },
  });
}

double DistributionSpec::cdf(double x) const {
  if (!finite(x)) throw DomainError("cdf: non-finite argument");
  return visit(Overloaded{
      [x](const Uniform& d) { return std::clamp((x - d.lo) / (d.hi - d.lo), 0.0, 1.0); },
      [x](const Exponential& d) { return x <= 0 ? 0.0 : -std::expm1(-d.rate * x); },
      [x](const Normal& d) { return normal::cdf((x - d.mean) / d.sd); },
      [x](const Pareto& d) {
        const double z = (x - d.location) / d.scale;
        return z < 1.0 ? 0.0 : -std::expm1(-d.tail_index * std::log(z));
      },
      [x](const StudentT& d) { return boost::math::cdf(boost_t(d.df), x); },
      [x](const Cauchy& d) { return std::atan2(1.0, -(x - d.location) / d.scale) / kPi; },
      [x](const TwoPointMixture& d) { return x < d.x0 ? 0.0 : (x < d.x1 ? d.w0 : 1.0); },
  });
}

double DistributionSpec::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u outside [0,1]");
  if (u == 0.0) {
    return visit(Overloaded{
        [](const Uniform& d) { return d.lo; },
        [](const Exponential&) { return 0.0; },
        [](const Normal&) { return -kInf; },
        [](const Pareto& d) { return d.location + d.scale; },
        [](const StudentT&) { return -kInf; },
        [](const Cauchy&) { return -kInf; },
        [](const TwoPointMixture& d) { return d.w0 > 0 ? d.x0 : d.x1; },
    });
  }
  if (u == 1.0) {
    if (const auto* d = std::get_if<Uniform>(&family_)) return d->hi;
    if (const auto* d = std::get_if<TwoPointMixture>(&family_)) return d->w1 > 0 ? d->x1 : d->x0;
    throw UnboundedQuantileError("quantile(1) on a support unbounded above");
  }
  return visit([u](const auto& d) { return d.draw(u); });
}

std::vector<double> DistributionSpec::sample(std::uint64_t seed, std::size_t n) const {
  if (n == 0) throw EmptySampleError("sample: n must be >= 1");
  std::vector<double> out(n);
  sample_into(Substream(seed, SeedDomain::Experiment, 0), out);
  return out;
}

void DistributionSpec::sample_into(const Substream& stream, std::span<double> out) const {
  visit([&](const auto& d) {
    double* dst = out.data();
    stream.fill(out.size(), [&](std::uint64_t i, double u) { dst[i] = u; });
    draw_in_place(d, out);
  });
}

double DistributionSpec::abs_moment(double p) const {
  if (!(p > 0) || !finite(p)) throw DomainError("abs_moment: p must be a positive finite number");
  return visit(Overloaded{
      [p](const Uniform& d) {
        auto prim = [p](double x) { return std::copysign(std::pow(std::fabs(x), p + 1) / (p + 1), x); };
        return (prim(d.hi) - prim(d.lo)) / (d.hi - d.lo);
      },
      [p](const Exponential& d) { return std::tgamma(p + 1) / std::pow(d.rate, p); },
      [this, p](const Normal& d) {
        if (d.mean == 0.0)
          return std::pow(d.sd, p) * std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) / std::sqrt(kPi);
        return abs_moment_quadrature(p);
      },
      [this, p](const Pareto& d) {
        if (p >= d.tail_index) return kInf;
        if (d.location == 0.0) return std::pow(d.scale, p) * d.tail_index / (d.tail_index - p);
        return abs_moment_quadrature(p);
      },
      [p](const StudentT& d) {
        if (p >= d.df) return kInf;
        using boost::math::lgamma;
        const double lg = lgamma((p + 1) / 2) + lgamma((d.df - p) / 2) - lgamma(d.df / 2);
        return std::pow(d.df, p / 2) * std::exp(lg) / std::sqrt(kPi);
      },
      [this, p](const Cauchy& d) {
        if (p >= 1.0) return kInf;
        if (d.location == 0.0) return std::pow(d.scale, p) / std::cos(kPi * p / 2);
        return abs_moment_quadrature(p);
      },
      [p](const TwoPointMixture& d) {
        return d.w0 * std::pow(std::fabs(d.x0), p) + d.w1 * std::pow(std::fabs(d.x1), p);
      },
  });
}

double DistributionSpec::abs_moment_quadrature(double p) const {
  if (!(p > 0) || !finite(p)) throw DomainError("abs_moment: p must be a positive finite number");
  // Q(1 - s), accurate for small s.
  const auto upper = [this](double s) {
    return visit(Overloaded{
        [s](const Uniform& d) { return d.hi - s * (d.hi - d.lo); },
        [s](const Exponential& d) { return -std::log(s) / d.rate; },
        [s](const Normal& d) { return d.mean - d.sd * normal::quantile(s); },
        [s](const Pareto& d) { return d.location + d.scale * std::pow(s, -1.0 / d.tail_index); },
        [s](const StudentT& d) { return -d.draw(s); },
        [s](const Cauchy& d) { return 2.0 * d.location - d.draw(s); },
        [s](const TwoPointMixture& d) { return d.draw(1.0 - s); },
    });
  };
  const auto lower = [this](double u) { return visit([u](const auto& d) { return d.draw(u); }); };
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  const auto res = quad::integrate(
      [&](double u) {
        if (!(u > 0.0)) return 0.0;
        return std::pow(std::fabs(lower(u)), p) + std::pow(std::fabs(upper(u)), p);
      },
      0.0, 0.5, opts);
  if (!res.converged) throw MomentError("abs_moment quadrature did not converge; moment may be infinite");
  return res.value;
}

double DistributionSpec::mean() const {
  return visit(Overloaded{
      [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
      [](const Exponential& d) { return 1.0 / d.rate; },
      [](const Normal& d) { return d.mean; },
      [](const Pareto& d) {
        if (d.tail_index <= 1) throw MomentError("pareto: mean infinite for tail_index <= 1");
        return d.location + d.scale * d.tail_index / (d.tail_index - 1);
      },
      [](const StudentT& d) {
        if (d.df <= 1) throw MomentError("student_t: mean undefined for df <= 1");
        return 0.0;
      },
      [](const Cauchy&) -> double { throw MomentError("cauchy: mean undefined"); },
      [](const TwoPointMixture& d) { return d.w0 * d.x0 + d.w1 * d.x1; },
  });
}

double DistributionSpec::variance() const {
  return visit(Overloaded{
      [](const Uniform& d) { return (d.hi - d.lo) * (d.hi - d.lo) / 12.0; },
      [](const Exponential& d) { return 1.0 / (d.rate * d.rate); },
      [](const Normal& d) { return d.sd * d.sd; },
      [](const Pareto& d) {
        const double t = d.tail_index;
        if (t <= 2) throw MomentError("pareto: variance infinite for tail_index <= 2");
        return d.scale * d.scale * t / ((t - 1) * (t - 1) * (t - 2));
      },
      [](const StudentT& d) {
        if (d.df <= 2) throw MomentError("student_t: variance infinite for df <= 2");
        return d.df / (d.df - 2);
      },
      [](const Cauchy&) -> double { throw MomentError("cauchy: variance undefined"); },
      [](const TwoPointMixture& d) { return d.w0 * d.w1 * (d.x1 - d.x0) * (d.x1 - d.x0); },
  });
}

bool DistributionSpec::is_continuous() const noexcept {
  return !std::holds_alternative<TwoPointMixture>(family_);
}

bool DistributionSpec::bounded_below() const noexcept {
  return std::holds_alternative<Uniform>(family_) || std::holds_alternative<Exponential>(family_) ||
         std::holds_alternative<Pareto>(family_) || std::holds_alternative<TwoPointMixture>(family_);
}

bool DistributionSpec::bounded_above() const noexcept {
  return std::holds_alternative<Uniform>(family_) || std::holds_alternative<TwoPointMixture>(family_);
}

std::optional<double> DistributionSpec::symmetry_center() const noexcept {
  return visit(Overloaded{
      [](const Uniform& d) -> std::optional<double> { return 0.5 * (d.lo + d.hi); },
      [](const Exponential&) -> std::optional<double> { return std::nullopt; },
      [](const Normal& d) -> std::optional<double> { return d.mean; },
      [](const Pareto&) -> std::optional<double> { return std::nullopt; },
      [](const StudentT&) -> std::optional<double> { return 0.0; },
      [](const Cauchy& d) -> std::optional<double> { return d.location; },
      [](const TwoPointMixture& d) -> std::optional<double> {
        if (d.w0 == d.w1) return 0.5 * (d.x0 + d.x1);
        return std::nullopt;
      },
  });
}

std::string DistributionSpec::canonical() const {
  auto f = [](double x) { return format_shortest(x); };
  return visit(Overloaded{
      [&](const Uniform& d) { return "uniform(lo=" + f(d.lo) + ",hi=" + f(d.hi) + ")"; },
      [&](const Exponential& d) { return "exponential(rate=" + f(d.rate) + ")"; },
      [&](const Normal& d) { return "normal(mean=" + f(d.mean) + ",sd=" + f(d.sd) + ")"; },
      [&](const Pareto& d) {
        return "pareto(tail_index=" + f(d.tail_index) + ",scale=" + f(d.scale) +
               ",location=" + f(d.location) + ")";
      },
      [&](const StudentT& d) { return "student_t(df=" + f(d.df) + ")"; },
      [&](const Cauchy& d) { return "cauchy(location=" + f(d.location) + ",scale=" + f(d.scale) + ")"; },
      [&](const TwoPointMixture& d) {
        return "two_point_mixture(x0=" + f(d.x0) + ",x1=" + f(d.x1) + ",w0=" + f(d.w0) +
               ",w1=" + f(d.w1) + ")";
      },
  });
}

}  // namespace trimlab
