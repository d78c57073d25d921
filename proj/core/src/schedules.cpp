#include "trimlab/schedules.hpp"

#include <cmath>

#include "trimlab/error.hpp"
#include "trimlab/format.hpp"

namespace trimlab {
namespace {

// ceil() that does not bump exact integers hit with rounding noise, e.g.
// pow(1e5, 0.4) = 100.00000000000001.
std::int64_t ceil_count(double x) {
  const double guard = 1e-10 * std::max(1.0, std::fabs(x));
  return static_cast<std::int64_t>(std::ceil(x - guard));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ScheduleError(what);
}

}  // namespace

void check_trim(std::int64_t n, std::int64_t k, std::int64_t m) {
  if (!(k >= 0 && m >= 0 && k < n - m && n - m <= n)) {
    throw InvalidTrimError("trim counts violate 0 <= k_n < n - m_n <= n (n=" + std::to_string(n) +
                           ", k_n=" + std::to_string(k) + ", m_n=" + std::to_string(m) + ")");
  }
}

TrimmingSchedule::TrimmingSchedule(Rule rule) : rule_(std::move(rule)) {
  if (const auto* r = std::get_if<PowerLaw>(&rule_)) {
    require(r->rho_k >= 0 && r->rho_k < 1 && r->rho_m >= 0 && r->rho_m < 1,
            "power_law: exponents must lie in [0,1)");
  } else if (const auto* r = std::get_if<LogPower>(&rule_)) {
    require(std::isfinite(r->gamma_k) && std::isfinite(r->gamma_m) && r->gamma_k >= 0 && r->gamma_m >= 0,
            "log_power: gamma must be finite and >= 0");
  } else if (const auto* r = std::get_if<FixedFraction>(&rule_)) {
    require(r->a >= 0 && r->a < 1 && r->b >= 0 && r->b < 1, "fixed_fraction: fractions must lie in [0,1)");
  } else if (const auto* r = std::get_if<Explicit>(&rule_)) {
    require(!r->table.empty(), "explicit: table must not be empty");
  }
}

std::string_view TrimmingSchedule::name() const noexcept {
  switch (rule_.index()) {
    case 0: return "power_law";
    case 1: return "log_power";
    case 2: return "fixed_fraction";
    default: return "explicit";
  }
}

TrimPoint TrimmingSchedule::evaluate(std::int64_t n) const {
  if (n < 2) throw ScheduleError("schedule: n must be >= 2");
  const double dn = static_cast<double>(n);
  std::int64_t k = 0, m = 0;
  if (const auto* r = std::get_if<PowerLaw>(&rule_)) {
    k = ceil_count(std::pow(dn, r->rho_k));
    m = ceil_count(std::pow(dn, r->rho_m));
  } else if (const auto* r = std::get_if<LogPower>(&rule_)) {
    const double ln = std::log(dn);
    k = ceil_count(dn / std::pow(ln, r->gamma_k));
    m = ceil_count(dn / std::pow(ln, r->gamma_m));
  } else if (const auto* r = std::get_if<FixedFraction>(&rule_)) {
    k = ceil_count(r->a * dn);
    m = ceil_count(r->b * dn);
  } else {
    const auto& table = std::get<Explicit>(rule_).table;
    const auto it = table.find(n);
    if (it == table.end()) throw ScheduleError("explicit schedule has no entry for n=" + std::to_string(n));
    k = it->second.first;
    m = it->second.second;
  }
  if (!(k >= 0 && m >= 0 && k < n - m)) {
    throw ScheduleError(std::string(name()) + " schedule violates 0 <= k_n < n - m_n <= n at n=" +
                        std::to_string(n) + " (k_n=" + std::to_string(k) + ", m_n=" + std::to_string(m) + ")");
  }
  return {n, k, m, static_cast<double>(k) / dn, static_cast<double>(m) / dn};
}

std::string TrimmingSchedule::canonical() const {
  auto f = [](double x) { return format_shortest(x); };
  if (const auto* r = std::get_if<PowerLaw>(&rule_)) return "power_law(rho_k=" + f(r->rho_k) + ",rho_m=" + f(r->rho_m) + ")";
  if (const auto* r = std::get_if<LogPower>(&rule_))
    return "log_power(gamma_k=" + f(r->gamma_k) + ",gamma_m=" + f(r->gamma_m) + ")";
  if (const auto* r = std::get_if<FixedFraction>(&rule_)) return "fixed_fraction(a=" + f(r->a) + ",b=" + f(r->b) + ")";
  std::string out = "explicit(";
  for (const auto& [n, km] : std::get<Explicit>(rule_).table)
    out += std::to_string(n) + ":" + std::to_string(km.first) + "/" + std::to_string(km.second) + ";";
  return out + ")";
}

}  // namespace trimlab
