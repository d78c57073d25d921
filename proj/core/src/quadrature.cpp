#include "trimlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "trimlab/error.hpp"
#include "trimlab/summation.hpp"

namespace trimlab::quad {
namespace {

// Kronrod abscissae (positive half) with the paired Gauss-7 weights.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv;
  fv[14] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    fv[2 * j] = f(center - dx);
    fv[2 * j + 1] = f(center + dx);
  }
  double kronrod = kKronrod[7] * fv[14];
  double gauss = kGauss[3] * fv[14];
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[2 * j] + fv[2 * j + 1];
    kronrod += kKronrod[j] * pair;
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  if (!std::isfinite(kronrod)) throw MomentError("quadrature: integrand is not finite");

  // QUADPACK error estimate: scale |K - G| by the integrand's variation.
  const double mean = 0.5 * kronrod;
  double asc = kKronrod[7] * std::fabs(fv[14] - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrod[j] * (std::fabs(fv[2 * j] - mean) + std::fabs(fv[2 * j + 1] - mean));
  kronrod *= half;
  gauss *= half;
  asc *= std::fabs(half);
  double err = std::fabs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {a, b, kronrod, std::max(err, std::fabs(kronrod) * 5e-16)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("quadrature: infinite limits");
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::vector<double> cuts{a};
  if (opts.split_endpoints) {
    const double w = b - a;
    for (double frac : {1e-12, 1e-9, 1e-6, 1e-3, 0.05}) cuts.push_back(a + frac * w);
    cuts.push_back(a + 0.5 * w);
    for (double frac : {0.05, 1e-3, 1e-6, 1e-9, 1e-12}) cuts.push_back(b - frac * w);
  }
  cuts.push_back(b);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> heap;
  heap.reserve(64);
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    heap.push_back(gauss_kronrod(f, cuts[i], cuts[i + 1]));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end());

  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };
  while (total_err > tolerance() && heap.size() < opts.max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval cannot be split further in double precision.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  // Re-add from scratch; the running total accumulates cancellation.
  CompensatedSum sum;
  double err = 0.0;
  for (const auto& s : heap) {
    sum += s.value;
    err += s.error;
  }
  out.value = sign * sum.value();
  out.error = err;
  out.intervals = heap.size();
  out.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(out.value));
  return out;
}

}  // namespace trimlab::quad
