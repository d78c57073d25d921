#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace trimlab {

// k_n = ceil(n^rho_k), m_n = ceil(n^rho_m).
struct PowerLaw {
  double rho_k = 0.5, rho_m = 0.5;
  bool operator==(const PowerLaw&) const = default;
};

// k_n = ceil(n / (log n)^gamma_k), likewise m_n.
struct LogPower {
  double gamma_k = 3.0, gamma_m = 3.0;
  bool operator==(const LogPower&) const = default;
};

// k_n = ceil(a n), m_n = ceil(b n).
struct FixedFraction {
  double a = 0.0, b = 0.0;
  bool operator==(const FixedFraction&) const = default;
};

// Tabulated n -> (k_n, m_n); other n are an error.
struct Explicit {
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> table;
  bool operator==(const Explicit&) const = default;
};

struct TrimPoint {
  std::int64_t n = 0, k = 0, m = 0;
  double a = 0.0, b = 0.0;  // k/n, m/n
};

class TrimmingSchedule {
 public:
  using Rule = std::variant<PowerLaw, LogPower, FixedFraction, Explicit>;

  explicit TrimmingSchedule(Rule rule);

  static TrimmingSchedule power_law(double rho_k, double rho_m) { return TrimmingSchedule(PowerLaw{rho_k, rho_m}); }
  static TrimmingSchedule power_law(double rho) { return power_law(rho, rho); }
  static TrimmingSchedule log_power(double gamma_k, double gamma_m) {
    return TrimmingSchedule(LogPower{gamma_k, gamma_m});
  }
  static TrimmingSchedule log_power(double gamma) { return log_power(gamma, gamma); }
  static TrimmingSchedule fixed_fraction(double a, double b) { return TrimmingSchedule(FixedFraction{a, b}); }
  static TrimmingSchedule untrimmed() { return fixed_fraction(0.0, 0.0); }

  const Rule& rule() const noexcept { return rule_; }
  std::string_view name() const noexcept;

  // Throws ScheduleError unless 0 <= k_n < n - m_n <= n.
  TrimPoint evaluate(std::int64_t n) const;

  std::string canonical() const;
  bool operator==(const TrimmingSchedule&) const = default;

 private:
  Rule rule_;
};

// Throws InvalidTrimError unless 0 <= k < n - m <= n.
void check_trim(std::int64_t n, std::int64_t k, std::int64_t m);

}  // namespace trimlab
