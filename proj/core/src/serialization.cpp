#include "trimlab/serialization.hpp"

#include <cstdio>
#include <ostream>

#include "trimlab/error.hpp"
#include "trimlab/format.hpp"
#include "trimlab/momentbound.hpp"
#include "trimlab/montecarlo.hpp"

namespace trimlab {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

const Json& field(const Json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::int64_t integer(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

const Json& object(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_object()) throw ConfigError(where + ": field '" + key + "' must be an object");
  return v;
}

std::string text(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

void reject_unknown_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

Json to_json(const DistributionSpec& spec) {
  Json params = spec.visit(Overloaded{
      [](const Uniform& d) { return Json{{"lo", d.lo}, {"hi", d.hi}}; },
      [](const Exponential& d) { return Json{{"rate", d.rate}}; },
      [](const Normal& d) { return Json{{"mean", d.mean}, {"sd", d.sd}}; },
      [](const Pareto& d) { return Json{{"tail_index", d.tail_index}, {"scale", d.scale}, {"location", d.location}}; },
      [](const StudentT& d) { return Json{{"df", d.df}}; },
      [](const Cauchy& d) { return Json{{"location", d.location}, {"scale", d.scale}}; },
      [](const TwoPointMixture& d) { return Json{{"x0", d.x0}, {"x1", d.x1}, {"w0", d.w0}, {"w1", d.w1}}; },
  });
  return Json{{"family", std::string(spec.name())}, {"params", std::move(params)}};
}

DistributionSpec spec_from_json(const Json& j) {
  const std::string where = "distribution";
  reject_unknown_fields(j, {"family", "params"}, where);
  const auto family = text(j, "family", where);
  const auto& p = object(j, "params", where);
  const std::string pw = where + ".params";
  if (family == "uniform") {
    reject_unknown_fields(p, {"lo", "hi"}, pw);
    return DistributionSpec(Uniform{number(p, "lo", pw), number(p, "hi", pw)});
  }
  if (family == "exponential") {
    reject_unknown_fields(p, {"rate"}, pw);
    return DistributionSpec(Exponential{number(p, "rate", pw)});
  }
  if (family == "normal") {
    reject_unknown_fields(p, {"mean", "sd"}, pw);
    return DistributionSpec(Normal{number(p, "mean", pw), number(p, "sd", pw)});
  }
  if (family == "pareto") {
    reject_unknown_fields(p, {"tail_index", "scale", "location"}, pw);
    return DistributionSpec(
        Pareto{number(p, "tail_index", pw), number(p, "scale", pw), number_or(p, "location", 0.0, pw)});
  }
  if (family == "student_t") {
    reject_unknown_fields(p, {"df"}, pw);
    return DistributionSpec(StudentT{number(p, "df", pw)});
  }
  if (family == "cauchy") {
    reject_unknown_fields(p, {"location", "scale"}, pw);
    return DistributionSpec(Cauchy{number(p, "location", pw), number(p, "scale", pw)});
  }
  if (family == "two_point_mixture") {
    reject_unknown_fields(p, {"x0", "x1", "w0", "w1"}, pw);
    return DistributionSpec(
        TwoPointMixture{number(p, "x0", pw), number(p, "x1", pw), number(p, "w0", pw), number(p, "w1", pw)});
  }
  throw ConfigError(where + ": unknown family '" + family + "'");
}

Json to_json(const TrimmingSchedule& schedule) {
  Json params = std::visit(Overloaded{
                               [](const PowerLaw& r) { return Json{{"rho_k", r.rho_k}, {"rho_m", r.rho_m}}; },
                               [](const LogPower& r) { return Json{{"gamma_k", r.gamma_k}, {"gamma_m", r.gamma_m}}; },
                               [](const FixedFraction& r) { return Json{{"a", r.a}, {"b", r.b}}; },
                               [](const Explicit& r) {
                                 Json table = Json::array();
                                 for (const auto& [n, km] : r.table) table.push_back({n, km.first, km.second});
                                 return Json{{"table", std::move(table)}};
                               },
                           },
                           schedule.rule());
  return Json{{"rule", std::string(schedule.name())}, {"params", std::move(params)}};
}

TrimmingSchedule schedule_from_json(const Json& j) {
  const std::string where = "schedule";
  reject_unknown_fields(j, {"rule", "params"}, where);
  const auto rule = text(j, "rule", where);
  const auto& p = object(j, "params", where);
  const std::string pw = where + ".params";
  // A shared exponent, or one per side.
  const auto pair = [&](const char* both, const char* left, const char* right) {
    reject_unknown_fields(p, {both, left, right}, pw);
    if (p.contains(both)) {
      if (p.contains(left) || p.contains(right)) {
        throw ConfigError(pw + ": give either '" + both + "' or '" + left + "'/'" + right + "'");
      }
      const double v = number(p, both, pw);
      return std::pair{v, v};
    }
    return std::pair{number(p, left, pw), number(p, right, pw)};
  };
  if (rule == "power_law") {
    const auto [k, m] = pair("rho", "rho_k", "rho_m");
    return TrimmingSchedule::power_law(k, m);
  }
  if (rule == "log_power") {
    const auto [k, m] = pair("gamma", "gamma_k", "gamma_m");
    return TrimmingSchedule::log_power(k, m);
  }
  if (rule == "fixed_fraction") {
    reject_unknown_fields(p, {"a", "b"}, pw);
    return TrimmingSchedule::fixed_fraction(number(p, "a", pw), number(p, "b", pw));
  }
  if (rule == "explicit") {
    reject_unknown_fields(p, {"table"}, pw);
    const auto& table = field(p, "table", pw);
    if (!table.is_array()) throw ConfigError(pw + ": 'table' must be an array of [n, k, m]");
    Explicit e;
    for (const auto& row : table) {
      if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number_integer() ||
          !row[2].is_number_integer()) {
        throw ConfigError(pw + ": table rows must be [n, k, m] integers");
      }
      e.table[row[0].get<std::int64_t>()] = {row[1].get<std::int64_t>(), row[2].get<std::int64_t>()};
    }
    return TrimmingSchedule(std::move(e));
  }
  throw ConfigError(where + ": unknown rule '" + rule + "'");
}

Json to_json(const ExperimentConfig& config) {
  return Json{
      {"distribution", to_json(config.spec)},
      {"schedule", to_json(config.schedule)},
      {"n", config.n},
      {"replications", config.replications},
      {"seed", config.seed},
      {"x_grid", config.x_grid},
      {"c", config.c},
      {"A", config.A},
      {"normalization", std::string(to_string(config.normalization))},
      {"tails", std::string(to_string(config.tails))},
      {"level", config.level},
      {"center_replications", config.center_replications},
  };
}

ExperimentConfig experiment_from_json(const Json& j) {
  const std::string where = "config";
  try {
    reject_unknown_fields(j,
                          {"distribution", "schedule", "n", "replications", "seed", "x_grid", "c", "A",
                           "normalization", "tails", "level", "center_replications"},
                          where);
    ExperimentConfig c;
    c.spec = spec_from_json(object(j, "distribution", where));
    c.schedule = schedule_from_json(object(j, "schedule", where));
    c.n = integer(j, "n", where);
    c.replications = integer(j, "replications", where);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
        throw ConfigError(where + ": 'seed' must be a nonnegative integer");
      }
      c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("x_grid")) {
      const auto& g = j.at("x_grid");
      if (!g.is_array()) throw ConfigError(where + ": 'x_grid' must be an array of numbers");
      for (const auto& x : g) {
        if (!x.is_number()) throw ConfigError(where + ": 'x_grid' must be an array of numbers");
        c.x_grid.push_back(x.get<double>());
      }
    }
    c.c = number_or(j, "c", c.c, where);
    c.A = number_or(j, "A", c.A, where);
    if (j.contains("normalization")) c.normalization = parse_normalization(text(j, "normalization", where));
    if (j.contains("tails")) c.tails = parse_tails(text(j, "tails", where));
    c.level = number_or(j, "level", c.level, where);
    if (j.contains("center_replications")) c.center_replications = integer(j, "center_replications", where);
    validate(c);
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string config_hash(const ExperimentConfig& config) { return json_hash(to_json(resolved(config))); }

std::string json_hash(const Json& j) {
  const std::string canonical = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const TrimPoint& t) { return Json{{"n", t.n}, {"k", t.k}, {"m", t.m}, {"a", t.a}, {"b", t.b}}; }

Json to_json(const Normalizers& norm) {
  return Json{{"trim", to_json(norm.trim)},
              {"xi_a", finite_or_null(norm.xi_a)},
              {"xi_b", finite_or_null(norm.xi_b)},
              {"mu_n", norm.mu_n},
              {"winsor_mean", norm.winsor_mean},
              {"sigma_w", norm.sigma_w}};
}

Json to_json(const PopulationFunctionals& f) {
  return Json{{"u", f.u},       {"v", f.v}, {"mu", f.mu}, {"sigma2", f.sigma2}, {"winsor_mean", f.winsor_mean},
              {"winsor_var", f.winsor_var}};
}

Json to_json(const WinsorizedMoments& w) {
  return Json{{"mean", w.mean}, {"var", w.var}, {"xi_lo", finite_or_null(w.xi_lo)}, {"xi_hi", finite_or_null(w.xi_hi)}};
}

Json to_json(const ConditionReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json o{{"n", row.n}};
    for (const auto& [name, value] : row.values) o[name] = finite_or_null(value);
    rows.push_back(std::move(o));
  }
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  Json out{{"condition", r.condition},
           {"n_grid", r.n_grid},
           {"rows", std::move(rows)},
           {"model", r.model},
           {"exponent", finite_or_null(r.exponent)},
           {"residual", finite_or_null(r.residual)},
           {"threshold", finite_or_null(r.threshold)},
           {"verdict", std::string(to_string(r.verdict))},
           {"note", r.note}};
  if (!r.parts.empty()) out["parts"] = std::move(parts);
  return out;
}

Json to_json(const CenterEstimate& c) {
  return Json{{"replications", c.replications},
              {"mean_tn", c.mean_tn},
              {"se_mean_tn", c.se_mean_tn},
              {"var_tn", c.var_tn},
              {"se_var_tn", c.se_var_tn},
              {"mean_wbar", c.mean_wbar},
              {"se_mean_wbar", c.se_mean_wbar},
              {"e_wbar", c.e_wbar},
              {"mu_n", c.mu_n},
              {"sigma_w", c.sigma_w},
              {"scaled_mean_gap", c.scaled_mean_gap},
              {"scaled_mean_gap_se", c.scaled_mean_gap_se},
              {"scaled_sd_gap", c.scaled_sd_gap},
              {"scaled_sd_gap_se", c.scaled_sd_gap_se},
              {"scaled_wbar_gap", c.scaled_wbar_gap}};
}

Json to_json(const TailRow& row) {
  return Json{{"x", row.x},       {"count", row.count}, {"p_hat", row.p_hat}, {"normal_tail", row.normal_tail},
              {"ratio", row.ratio}, {"ci_lo", row.ci_lo}, {"ci_hi", row.ci_hi}, {"p_lo", row.p_lo},
              {"p_hi", row.p_hi}, {"low_count_flag", row.low_count}};
}

Json to_json(const TailRatioReport& r) {
  Json upper = Json::array(), lower = Json::array();
  for (const auto& row : r.upper) upper.push_back(to_json(row));
  for (const auto& row : r.lower) lower.push_back(to_json(row));
  Json out{{"config", to_json(r.config)},
           {"config_hash", r.config_hash},
           {"trim", to_json(r.trim)},
           {"normalizers", to_json(r.normalizers)},
           {"center", r.center},
           {"scale", r.scale},
           {"ks_distance", r.ks_distance}};
  if (r.centers) out["centers"] = to_json(*r.centers);
  if (r.config.tails != Tails::Lower) out["upper"] = std::move(upper);
  if (r.config.tails != Tails::Upper) out["lower"] = std::move(lower);
  return out;
}

Json to_json(const MillsReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"x", row.x}, {"tail", row.tail}, {"ratio", row.ratio}});
  }
  return Json{{"c", r.c}, {"rows", std::move(rows)}, {"monotone", r.monotone}};
}

Json to_json(const AuditReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back({{"delta", row.delta}, {"count", row.count}, {"p_hat", row.p_hat}});
  return Json{{"replications", r.replications},
              {"trim", to_json(r.trim)},
              {"max_relative_residual", r.max_relative_residual},
              {"max_form_gap", r.max_form_gap},
              {"rows", std::move(rows)}};
}

Json to_json(const ExpectationInterval& ci) {
  Json out{{"mode", ci.mode},
           {"trim", to_json(ci.trim)},
           {"level", ci.level},
           {"t_n", ci.t_n},
           {"sigma", ci.sigma},
           {"z", ci.z},
           {"half_width", ci.half_width},
           {"lo", ci.lo},
           {"hi", ci.hi},
           {"justified", ci.justified},
           {"condition", to_json(ci.condition)}};
  if (!ci.warning.empty()) out["warning"] = ci.warning;
  return out;
}

Json to_json(const CoverageReport& r) {
  return Json{{"trials", r.trials},
              {"covered", r.covered},
              {"coverage", r.coverage},
              {"ci_lo", r.ci_lo},
              {"ci_hi", r.ci_hi},
              {"target", r.target},
              {"half_width", r.half_width},
              {"mean_center_gap", r.mean_center_gap},
              {"trim", to_json(r.trim)}};
}

Json to_json(const BoundVerification& v) {
  return Json{{"k", v.query.k},
              {"delta", v.query.delta},
              {"i", v.query.i},
              {"n", v.query.n},
              {"rho", v.query.rho()},
              {"alpha", v.query.alpha()},
              {"replications", v.replications},
              {"mc_estimate", v.mc_estimate},
              {"standard_error", v.standard_error},
              {"bound", v.bound},
              {"margin", v.margin},
              {"dominated", v.dominated}};
}

void write_tail_csv(std::ostream& out, const std::vector<TailRow>& rows, const std::string& hash) {
  out << "# config_hash=" << hash << '\n';
  out << "x,count,p_hat,normal_tail,ratio,ci_lo,ci_hi,low_count_flag\n";
  for (const auto& r : rows) {
    out << format_17g(r.x) << ',' << r.count << ',' << format_17g(r.p_hat) << ',' << format_17g(r.normal_tail) << ','
        << format_17g(r.ratio) << ',' << format_17g(r.ci_lo) << ',' << format_17g(r.ci_hi) << ','
        << (r.low_count ? 1 : 0) << '\n';
  }
}

}  // namespace trimlab
