#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trimlab/normal.hpp"
#include "trimlab/random.hpp"

namespace trimlab {

// Parametric families. Each draw() is the quantile restricted to the open
// interval (0,1) and performs no validation; DistributionSpec is the checked
// interface.
struct Uniform {
  double lo = 0.0, hi = 1.0;
  double draw(double u) const noexcept { return lo + u * (hi - lo); }
  bool operator==(const Uniform&) const = default;
};

struct Exponential {
  double rate = 1.0;
  double draw(double u) const noexcept { return -std::log1p(-u) / rate; }
  bool operator==(const Exponential&) const = default;
};

struct Normal {
  double mean = 0.0, sd = 1.0;
  double draw(double u) const { return mean + sd * normal::quantile(u); }
  void draw_in_place(std::span<double> x) const noexcept {
    normal::quantile_in_place(x.data(), x.size());
    for (double& v : x) v = mean + sd * v;
  }
  bool operator==(const Normal&) const = default;
};

// F(x) = 1 - ((x - location) / scale)^(-tail_index) for x >= location + scale.
struct Pareto {
  double tail_index = 1.0, scale = 1.0, location = 0.0;
  double draw(double u) const noexcept {
    return location + scale * std::exp(-std::log1p(-u) / tail_index);
  }
  bool operator==(const Pareto&) const = default;
};

struct StudentT {
  double df = 1.0;
  double draw(double u) const;
  bool operator==(const StudentT&) const = default;
};

struct Cauchy {
  double location = 0.0, scale = 1.0;
  double draw(double u) const noexcept {
    constexpr double pi = 3.14159265358979323846;
    if (std::fabs(u - 0.5) < 0.25) return location + scale * std::tan(pi * (u - 0.5));
    if (u < 0.5) return location - scale / std::tan(pi * u);
    return location + scale / std::tan(pi * (1.0 - u));
  }
  bool operator==(const Cauchy&) const = default;
};

// Two atoms x0 < x1 with weights w0 + w1 = 1. Exists to exercise the
// left-continuous inverse at jumps.
struct TwoPointMixture {
  double x0 = 0.0, x1 = 1.0, w0 = 0.5, w1 = 0.5;
  double draw(double u) const noexcept { return u <= w0 ? x0 : x1; }
  bool operator==(const TwoPointMixture&) const = default;
};

// Replaces uniforms in (0,1) by family.draw() of each, using the family's
// block kernel when it has one.
template <class Family>
void draw_in_place(const Family& family, std::span<double> x) {
  if constexpr (requires { family.draw_in_place(x); }) {
    family.draw_in_place(x);
  } else {
    for (double& v : x) v = family.draw(v);
  }
}

class DistributionSpec {
 public:
  using Family =
      std::variant<Uniform, Exponential, Normal, Pareto, StudentT, Cauchy, TwoPointMixture>;

  // Throws DomainError when a parameter violates the family's constraints.
  explicit DistributionSpec(Family family);

  static DistributionSpec uniform(double lo, double hi) { return DistributionSpec(Uniform{lo, hi}); }
  static DistributionSpec exponential(double rate) { return DistributionSpec(Exponential{rate}); }
  static DistributionSpec normal(double mean, double sd) { return DistributionSpec(Normal{mean, sd}); }
  static DistributionSpec pareto(double tail_index, double scale, double location = 0.0) {
    return DistributionSpec(Pareto{tail_index, scale, location});
  }
  static DistributionSpec student_t(double df) { return DistributionSpec(StudentT{df}); }
  static DistributionSpec cauchy(double location, double scale) {
    return DistributionSpec(Cauchy{location, scale});
  }
  static DistributionSpec two_point(double x0, double x1, double w0) {
    return DistributionSpec(TwoPointMixture{x0, x1, w0, 1.0 - w0});
  }

  const Family& family() const noexcept { return family_; }
  std::string_view name() const noexcept;

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), family_);
  }

  // F(x). Throws DomainError for non-finite x.
  double cdf(double x) const;

  // F^{-1}(u) = inf{x : F(x) >= u}; quantile(0) is the right limit F^{-1}(0+),
  // possibly -inf. quantile(1) throws UnboundedQuantileError unless the
  // support is bounded above.
  double quantile(double u) const;

  // X_1..X_n in index order, X_i = F^{-1}(U_i) with U_i drawn from
  // Substream(seed, Experiment, 0). Throws EmptySampleError on n = 0.
  std::vector<double> sample(std::uint64_t seed, std::size_t n) const;
  void sample_into(const Substream& stream, std::span<double> out) const;

  // E|X|^p, +inf when divergent. Closed forms where the family has one,
  // otherwise the quadrature route.
  double abs_moment(double p) const;
  // Always integrates |F^{-1}(u)|^p over (0,1); 1e-8 relative tolerance.
  double abs_moment_quadrature(double p) const;

  double mean() const;      // MomentError if E|X| = inf
  double variance() const;  // MomentError if E X^2 = inf

  bool is_continuous() const noexcept;
  bool bounded_below() const noexcept;
  bool bounded_above() const noexcept;
  std::optional<double> symmetry_center() const noexcept;

  // Stable textual form, e.g. "normal(mean=0,sd=1)"; doubles round-trip.
  std::string canonical() const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  Family family_;
};

}  // namespace trimlab
