#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "trimlab/conditions.hpp"
#include "trimlab/error.hpp"
#include "trimlab/functionals.hpp"
#include "trimlab/momentbound.hpp"
#include "trimlab/montecarlo.hpp"
#include "trimlab/parallel.hpp"
#include "trimlab/serialization.hpp"

namespace trimlab::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::system_clock;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::string data_path;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> level;
};

std::string iso_utc(Clock::time_point t) {
  const std::time_t tt = Clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json read_json(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<double> read_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read data file '" + path + "'");
  std::vector<double> values;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    double v = 0.0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      throw ConfigError(path + ":" + std::to_string(no) + ": expected one finite number per line");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("data file '" + path + "' has no values");
  return values;
}

// --seed, then the config, then TRIMLAB_SEED, then 1.
std::uint64_t resolve_seed(const Options& opt, const Json& config) {
  if (opt.seed) return *opt.seed;
  if (config.contains("seed")) {
    const auto& s = config.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("config: 'seed' must be a nonnegative integer");
    return s.get<std::uint64_t>();
  }
  if (const char* env = std::getenv("TRIMLAB_SEED")) {
    std::uint64_t v = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("TRIMLAB_SEED must be an integer");
    return v;
  }
  return 1;
}

Json manifest(const Options& opt, Clock::time_point start, const std::string& hash, std::uint64_t seed,
              std::vector<std::string> outputs) {
  const auto end = Clock::now();
  return Json{{"config_path", opt.config_path},
              {"version", TRIMLAB_VERSION_STRING},
              {"config_hash", hash},
              {"seed", seed},
              {"workers", resolve_workers(opt.workers)},
              {"started_at", iso_utc(start)},
              {"finished_at", iso_utc(end)},
              {"runtime_seconds", std::chrono::duration<double>(end - start).count()},
              {"outputs", std::move(outputs)}};
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << text;
}

void emit(const Options& opt, Json manifest_json, Json report, std::ostream& out) {
  Json doc{{"manifest", std::move(manifest_json)}, {"report", std::move(report)}};
  write_text(opt.out_path, doc.dump(2) + "\n", out);
}

std::vector<std::string> outputs_of(const Options& opt) {
  return opt.out_path.empty() ? std::vector<std::string>{"-"} : std::vector<std::string>{opt.out_path};
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  const auto j = read_json(opt.config_path);
  auto config = experiment_from_json(j);
  config.seed = resolve_seed(opt, j);
  if (opt.level) config.level = *opt.level;
  config = resolved(config);
  const auto report = run_experiment(config, {opt.workers});

  if (opt.format == "json") {
    emit(opt, manifest(opt, start, report.config_hash, config.seed, outputs_of(opt)), to_json(report), out);
    return kExitOk;
  }
  const bool both = config.tails == Tails::Both;
  std::ostringstream main_csv, lower_csv;
  write_tail_csv(main_csv, config.tails == Tails::Lower ? report.lower : report.upper, report.config_hash);
  if (both) write_tail_csv(lower_csv, report.lower, report.config_hash);
  if (opt.out_path.empty()) {
    out << main_csv.str();
    if (both) out << "\n" << lower_csv.str();
    return kExitOk;
  }
  std::vector<std::string> outputs{opt.out_path};
  write_text(opt.out_path, main_csv.str(), out);
  if (both) {
    outputs.push_back(opt.out_path + ".lower.csv");
    write_text(outputs.back(), lower_csv.str(), out);
  }
  const auto manifest_path = opt.out_path + ".manifest.json";
  outputs.push_back(manifest_path);
  write_text(manifest_path, manifest(opt, start, report.config_hash, config.seed, outputs).dump(2) + "\n", out);
  return kExitOk;
}

std::vector<std::int64_t> grid_from(const Json& j, const char* key) {
  if (!j.contains(key)) return default_n_grid();
  const auto& g = j.at(key);
  if (!g.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& v : g) {
    if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an array of integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

std::vector<double> reals_from(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& g = j.at(key);
  if (!g.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : g) {
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double real_from(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

int cmd_conditions(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  const auto j = read_json(opt.config_path);
  reject_unknown_fields(j, {"schedule", "distribution", "p", "checks", "n_grid", "t_set", "eps_grid"}, "config");
  if (!j.contains("schedule")) throw ConfigError("config: missing field 'schedule'");
  const auto schedule = schedule_from_json(j.at("schedule"));
  const auto grid = grid_from(j, "n_grid");
  std::optional<DistributionSpec> spec;
  if (j.contains("distribution")) spec = spec_from_json(j.at("distribution"));

  std::vector<std::string> checks{"intermediate", "c_an2", "abc"};
  if (spec) checks.push_back("cgh");
  if (j.contains("checks")) {
    checks.clear();
    for (const auto& c : j.at("checks")) {
      if (!c.is_string()) throw ConfigError("'checks' must be an array of strings");
      checks.push_back(c.get<std::string>());
    }
  }
  Json reports = Json::array();
  for (const auto& c : checks) {
    if (c == "intermediate") {
      reports.push_back(to_json(check_intermediate(schedule, real_from(j, "p"), grid)));
    } else if (c == "c_an2") {
      reports.push_back(to_json(check_c_an2(schedule, real_from(j, "p"), grid)));
    } else if (c == "abc") {
      reports.push_back(to_json(check_heavy(schedule, grid)));
    } else if (c == "cgh") {
      if (!spec) throw ConfigError("check 'cgh' needs a 'distribution'");
      const auto t_set = reals_from(j, "t_set", {-1.0, 1.0});
      const auto eps = reals_from(j, "eps_grid", {0.05, 0.1, 0.25, 0.5, 1.0});
      reports.push_back(to_json(check_cgh(*spec, schedule, t_set, grid, eps)));
    } else {
      throw ConfigError("unknown check '" + c + "' (expected intermediate, c_an2, abc or cgh)");
    }
  }
  emit(opt, manifest(opt, start, json_hash(j), 0, outputs_of(opt)), Json{{"conditions", std::move(reports)}}, out);
  return kExitOk;
}

int cmd_functionals(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  const auto j = read_json(opt.config_path);
  reject_unknown_fields(j, {"distribution", "window", "schedule", "n"}, "config");
  if (!j.contains("distribution")) throw ConfigError("config: missing field 'distribution'");
  const auto spec = spec_from_json(j.at("distribution"));
  Json report{{"distribution", to_json(spec)}};
  if (j.contains("window")) {
    const auto w = reals_from(j, "window", {});
    if (w.size() != 2) throw ConfigError("'window' must be [lo, hi] with 0 <= lo < hi <= 1");
    auto f = to_json(population_functionals(spec, w[0], 1.0 - w[1]));
    f["window"] = w;
    report["functionals"] = std::move(f);
  }
  if (j.contains("schedule")) {
    if (!j.contains("n") || !j.at("n").is_number_integer()) throw ConfigError("'schedule' needs an integer 'n'");
    const auto schedule = schedule_from_json(j.at("schedule"));
    report["normalizers"] = to_json(normalizers(spec, schedule, j.at("n").get<std::int64_t>()));
  }
  if (!report.contains("functionals") && !report.contains("normalizers")) {
    throw ConfigError("config needs a 'window' or a 'schedule' with 'n'");
  }
  emit(opt, manifest(opt, start, json_hash(j), 0, outputs_of(opt)), std::move(report), out);
  return kExitOk;
}

int cmd_moment_bound(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  const auto j = read_json(opt.config_path);
  reject_unknown_fields(j, {"distribution", "cells", "replications", "seed"}, "config");
  if (!j.contains("distribution")) throw ConfigError("config: missing field 'distribution'");
  const auto spec = spec_from_json(j.at("distribution"));
  const auto seed = resolve_seed(opt, j);
  std::int64_t reps = 100000;
  if (j.contains("replications")) {
    if (!j.at("replications").is_number_integer()) throw ConfigError("'replications' must be an integer");
    reps = j.at("replications").get<std::int64_t>();
  }
  if (!j.contains("cells") || !j.at("cells").is_array()) throw ConfigError("config: 'cells' must be an array");
  Json rows = Json::array();
  for (const auto& cell : j.at("cells")) {
    reject_unknown_fields(cell, {"k", "delta", "i", "n"}, "cells[]");
    BoundQuery q;
    q.k = real_from(cell, "k");
    q.delta = real_from(cell, "delta");
    if (!cell.contains("i") || !cell.at("i").is_number_integer() || !cell.contains("n") ||
        !cell.at("n").is_number_integer()) {
      throw ConfigError("cells[]: 'i' and 'n' must be integers");
    }
    q.i = cell.at("i").get<std::int64_t>();
    q.n = cell.at("n").get<std::int64_t>();
    rows.push_back(to_json(verify_bound(spec, q, reps, seed, {opt.workers})));
  }
  emit(opt, manifest(opt, start, json_hash(j), seed, outputs_of(opt)), Json{{"cells", std::move(rows)}}, out);
  return kExitOk;
}

int cmd_ci(const Options& opt, std::ostream& out) {
  const auto start = Clock::now();
  const auto j = read_json(opt.config_path);
  reject_unknown_fields(j, {"distribution", "data_file", "schedule", "n", "level", "p", "seed"}, "config");
  if (!j.contains("schedule")) throw ConfigError("config: missing field 'schedule'");
  const auto schedule = schedule_from_json(j.at("schedule"));
  const double level = opt.level ? *opt.level : (j.contains("level") ? real_from(j, "level") : 0.95);
  const double p = real_from(j, "p");

  std::string data_path = opt.data_path;
  if (data_path.empty() && j.contains("data_file")) {
    if (!j.at("data_file").is_string()) throw ConfigError("'data_file' must be a string");
    fs::path path = j.at("data_file").get<std::string>();
    if (path.is_relative()) path = fs::path(opt.config_path).parent_path() / path;
    data_path = path.string();
  }
  const bool data_mode = !data_path.empty();
  if (data_mode == j.contains("distribution")) {
    throw ConfigError("give exactly one of 'distribution' and a data file");
  }
  ExpectationInterval ci;
  std::uint64_t seed = 0;
  if (data_mode) {
    ci = ci_expectation(read_data(data_path), schedule, level, p);
  } else {
    if (!j.contains("n") || !j.at("n").is_number_integer()) throw ConfigError("spec mode needs an integer 'n'");
    seed = resolve_seed(opt, j);
    ci = ci_expectation(spec_from_json(j.at("distribution")), schedule, j.at("n").get<std::int64_t>(), level, seed,
                        p);
  }
  emit(opt, manifest(opt, start, json_hash(j), seed, outputs_of(opt)), to_json(ci), out);
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"trimlab: trimmed means, Winsorized functionals and tail-ratio experiments", "trimlab"};
  app.set_version_flag("--version", TRIMLAB_VERSION_STRING);
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--out", opt.out_path, "output file (default: stdout)");
  };
  const auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", opt.workers, "worker threads (default: available parallelism)")
        ->check(CLI::PositiveNumber);
  };
  const auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", opt.seed, "seed (overrides config)"); };
  const auto add_level = [&](CLI::App* sub) {
    sub->add_option("--level", opt.level, "confidence level")->check(CLI::Range(0.0, 1.0));
  };

  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo tail-ratio experiment");
  add_common(simulate);
  add_workers(simulate);
  add_seed(simulate);
  add_level(simulate);
  simulate->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));

  auto* conditions = app.add_subcommand("conditions", "finite-n diagnostics of the trimming conditions");
  add_common(conditions);
  auto* functionals = app.add_subcommand("functionals", "population functionals over a quantile window");
  add_common(functionals);
  auto* bound = app.add_subcommand("moment-bound", "verify the order-statistic moment bound");
  add_common(bound);
  add_workers(bound);
  add_seed(bound);
  auto* ci = app.add_subcommand("ci", "confidence interval for E X_1 from a trimmed mean");
  add_common(ci);
  add_seed(ci);
  add_level(ci);
  ci->add_option("--data", opt.data_path, "data file, one number per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (conditions->parsed()) return cmd_conditions(opt, out);
    if (functionals->parsed()) return cmd_functionals(opt, out);
    if (bound->parsed()) return cmd_moment_bound(opt, out);
    if (ci->parsed()) return cmd_ci(opt, out);
  } catch (const Error& e) {
    err << "trimlab: " << e.what() << '\n';
    return e.category() == Error::Category::Input ? kExitInput : kExitNumeric;
  } catch (const Json::exception& e) {
    err << "trimlab: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace trimlab::cli
