#include "trimlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "trimlab/error.hpp"
#include "trimlab/schedules.hpp"
#include "trimlab/summation.hpp"

namespace trimlab {
namespace {

// Signed int_lo^hi [F_n^{-1}(u) - shift] du, walking the cells ((i-1)/n, i/n].
double cell_integral(std::span<const double> x, double lo, double hi, double shift) {
  if (lo == hi) return 0.0;
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  const auto n = static_cast<std::int64_t>(x.size());
  const double dn = static_cast<double>(n);
  const auto first = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(lo * dn)));
  const auto last = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(hi * dn)) + 1);
  CompensatedSum sum;
  for (std::int64_t i = first; i <= last; ++i) {
    const double cell_lo = std::max(lo, static_cast<double>(i - 1) / dn);
    const double cell_hi = std::min(hi, static_cast<double>(i) / dn);
    if (cell_hi <= cell_lo) continue;
    sum += (x[static_cast<std::size_t>(i - 1)] - shift) * (cell_hi - cell_lo);
  }
  return sign * sum.value();
}

// sgn(to - from) * (1/n) sum_{i=(from ^ to)+1}^{from v to} (X_{i:n} - shift).
double signed_sum(std::span<const double> x, std::int64_t from, std::int64_t to, double shift) {
  if (from == to) return 0.0;
  const double sign = to > from ? 1.0 : -1.0;
  CompensatedSum sum;
  for (std::int64_t i = std::min(from, to) + 1; i <= std::max(from, to); ++i) {
    sum += x[static_cast<std::size_t>(i - 1)] - shift;
  }
  return sign * sum.value() / static_cast<double>(x.size());
}

double abs_mass(std::span<const double> x, std::int64_t from, std::int64_t to, double shift) {
  CompensatedSum sum;
  for (std::int64_t i = std::min(from, to) + 1; i <= std::max(from, to); ++i) {
    sum += std::fabs(x[static_cast<std::size_t>(i - 1)] - shift);
  }
  return sum.value() / static_cast<double>(x.size());
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptySampleError("sample is empty");
  for (const double v : values_) {
    if (std::isnan(v)) throw DomainError("sample contains NaN");
  }
  std::sort(values_.begin(), values_.end());
}

std::vector<double> order_statistics(std::span<const double> sample) {
  const SortedSample sorted(sample);
  return {sorted.values().begin(), sorted.values().end()};
}

double empirical_quantile(const SortedSample& sample, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("empirical quantile needs 0 < u <= 1");
  const std::int64_t n = sample.size();
  const double dn = static_cast<double>(n);
  auto i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(u * dn)), 1, n);
  while (i > 1 && static_cast<double>(i - 1) / dn >= u) --i;
  while (i < n && static_cast<double>(i) / dn < u) ++i;
  return sample.order(i);
}

double trimmed_mean(const SortedSample& sample, std::int64_t k, std::int64_t m) {
  const std::int64_t n = sample.size();
  check_trim(n, k, m);
  CompensatedSum sum;
  for (std::int64_t i = k + 1; i <= n - m; ++i) sum += sample.order(i);
  return sum.value() / static_cast<double>(n);
}

double trimmed_mean_integral(const SortedSample& sample, std::int64_t k, std::int64_t m) {
  const std::int64_t n = sample.size();
  check_trim(n, k, m);
  const double dn = static_cast<double>(n);
  return cell_integral(sample.values(), static_cast<double>(k) / dn, static_cast<double>(n - m) / dn, 0.0);
}

double trimmed_mean_select(std::span<double> scratch, std::int64_t k, std::int64_t m) {
  const auto n = static_cast<std::int64_t>(scratch.size());
  if (n == 0) throw EmptySampleError("sample is empty");
  check_trim(n, k, m);
  const double dn = static_cast<double>(n);
  if (k == 0 && m == 0) {
    CompensatedSum sum;
    for (const double x : scratch) sum += x;
    return sum.value() / dn;
  }
  if ((k + m) * 16 <= n) {
    // Few trimmed points: keep the k smallest in a max-heap and the m largest
    // in a min-heap, then sum strictly between the two cut values.
    thread_local std::vector<double> low, high;
    low.clear();
    high.clear();
    const auto ku = static_cast<std::size_t>(k), mu = static_cast<std::size_t>(m);
    for (const double x : scratch) {
      if (ku > 0) {
        if (low.size() < ku) {
          low.push_back(x);
          std::push_heap(low.begin(), low.end());
        } else if (x < low.front()) {
          std::pop_heap(low.begin(), low.end());
          low.back() = x;
          std::push_heap(low.begin(), low.end());
        }
      }
      if (mu > 0) {
        if (high.size() < mu) {
          high.push_back(x);
          std::push_heap(high.begin(), high.end(), std::greater<>{});
        } else if (x > high.front()) {
          std::pop_heap(high.begin(), high.end(), std::greater<>{});
          high.back() = x;
          std::push_heap(high.begin(), high.end(), std::greater<>{});
        }
      }
    }
    const double cut_lo = ku > 0 ? low.front() : -std::numeric_limits<double>::infinity();
    const double cut_hi = mu > 0 ? high.front() : std::numeric_limits<double>::infinity();
    CompensatedSum sum;
    std::int64_t below = 0, above = 0;
    for (const double x : scratch) {
      if (x <= cut_lo) {
        ++below;
      } else if (x >= cut_hi) {
        ++above;
      } else {
        sum += x;
      }
    }
    if (below == k && above == m) return sum.value() / dn;
    // Ties at a cut value; fall through to selection.
  }
  const auto begin = scratch.begin();
  std::nth_element(begin, begin + k, scratch.end());
  if (m > 0) std::nth_element(begin + k, begin + (n - m), scratch.end());
  CompensatedSum sum;
  for (auto it = begin + k; it != begin + (n - m); ++it) sum += *it;
  return sum.value() / dn;
}

std::vector<double> winsorize(std::span<const double> sample, double xi_a, double xi_b) {
  if (xi_a > xi_b) throw DomainError("winsorize needs xi_a <= xi_b");
  std::vector<double> out(sample.size());
  std::transform(sample.begin(), sample.end(), out.begin(),
                 [=](double x) { return winsorize_value(x, xi_a, xi_b); });
  return out;
}

std::int64_t count_at_most(const SortedSample& sample, double xi) {
  const auto v = sample.values();
  return std::upper_bound(v.begin(), v.end(), xi) - v.begin();
}

CountStatistics counts(const SortedSample& sample, double xi_a, double xi_b) {
  CountStatistics c;
  c.n = sample.size();
  c.n_a = count_at_most(sample, xi_a);
  c.n_b = count_at_most(sample, xi_b);
  c.a_cap = static_cast<double>(c.n_a) / static_cast<double>(c.n);
  c.b_cap = static_cast<double>(c.n - c.n_b) / static_cast<double>(c.n);
  return c;
}

Remainder remainder(const SortedSample& sample, std::int64_t k, std::int64_t m, double xi_a, double xi_b) {
  const std::int64_t n = sample.size();
  check_trim(n, k, m);
  const auto c = counts(sample, xi_a, xi_b);
  const auto x = sample.values();
  const double dn = static_cast<double>(n);

  Remainder r;
  r.alpha = cell_integral(x, static_cast<double>(k) / dn, static_cast<double>(c.n_a) / dn, xi_a);
  r.beta = cell_integral(x, static_cast<double>(n - m) / dn, static_cast<double>(c.n_b) / dn, xi_b);
  r.alpha_sum = signed_sum(x, k, c.n_a, xi_a);
  r.beta_sum = signed_sum(x, n - m, c.n_b, xi_b);
  r.r_n = r.alpha_sum - r.beta_sum;

  const double scale_a = std::max(1.0, abs_mass(x, k, c.n_a, xi_a));
  const double scale_b = std::max(1.0, abs_mass(x, n - m, c.n_b, xi_b));
  r.form_gap = std::max(std::fabs(r.alpha - r.alpha_sum) / scale_a, std::fabs(r.beta - r.beta_sum) / scale_b);
  if (!(r.form_gap <= 1e-12)) {
    throw ConsistencyError("remainder: integral and signed-sum forms disagree by " + std::to_string(r.form_gap));
  }
  return r;
}

SampleDecomposition decompose(const SortedSample& sample, const Normalizers& norm) {
  const auto& trim = norm.trim;
  if (trim.n != sample.size()) throw DomainError("decompose: sample size does not match the trim point");
  SampleDecomposition d;
  d.n = trim.n;
  d.k = trim.k;
  d.m = trim.m;
  d.t_n = trimmed_mean(sample, trim.k, trim.m);
  d.mu_n = norm.mu_n;
  d.e_wbar = norm.winsor_mean;
  d.sigma_w = norm.sigma_w;

  CompensatedSum w;
  for (const double x : sample.values()) w += winsorize_value(x, norm.xi_a, norm.xi_b);
  d.w_bar = w.value() / static_cast<double>(d.n);

  const auto r = remainder(sample, trim.k, trim.m, norm.xi_a, norm.xi_b);
  d.r_n = r.r_n;
  d.r_n_alpha = r.alpha_sum;
  d.r_n_beta = r.beta_sum;
  d.form_gap = r.form_gap;

  // With E W = a xi_a + mu_n + b xi_b the mu_n terms cancel, so the residual
  // is n (T_n - W_bar) + k xi_a + m xi_b - n R_n summed term by term.
  CompensatedSum id;
  const auto x = sample.values();
  for (std::int64_t i = 0; i < d.n; ++i) {
    if (i >= d.k && i < d.n - d.m) id += x[i];
    id += -winsorize_value(x[i], norm.xi_a, norm.xi_b);
  }
  const auto add_product = [&id](double u, double v) {
    const double p = u * v;
    id += p;
    id += std::fma(u, v, -p);
  };
  const double dn = static_cast<double>(d.n);
  if (d.k > 0) add_product(static_cast<double>(d.k), norm.xi_a);
  if (d.m > 0) add_product(static_cast<double>(d.m), norm.xi_b);
  add_product(-dn, d.r_n);
  d.identity_residual = id.value() / dn;
  const double scale = std::max(std::fabs(d.t_n - d.mu_n), d.sigma_w / std::sqrt(static_cast<double>(d.n)));
  d.relative_residual = std::fabs(d.identity_residual) / scale;
  return d;
}

SampleDecomposition decompose(const SortedSample& sample, const DistributionSpec& spec, std::int64_t k,
                              std::int64_t m) {
  const std::int64_t n = sample.size();
  check_trim(n, k, m);
  const double dn = static_cast<double>(n);
  const TrimPoint trim{n, k, m, static_cast<double>(k) / dn, static_cast<double>(m) / dn};
  return decompose(sample, normalizers(spec, trim));
}

}  // namespace trimlab
