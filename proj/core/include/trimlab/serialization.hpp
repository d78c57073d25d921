#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trimlab/conditions.hpp"
#include "trimlab/distributions.hpp"
#include "trimlab/functionals.hpp"
#include "trimlab/schedules.hpp"

namespace trimlab {

struct ExperimentConfig;
struct TailRatioReport;
struct TailRow;
struct CenterEstimate;
struct MillsReport;
struct AuditReport;
struct ExpectationInterval;
struct CoverageReport;
struct BoundVerification;

using Json = nlohmann::json;

// {"family": "normal", "params": {"mean": 0, "sd": 1}}. Parsing rejects
// unknown families, unknown or missing parameters and wrong types with
// ConfigError.
Json to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const Json& j);

// {"rule": "power_law", "params": {"rho_k": 0.4, "rho_m": 0.4}}; "rho",
// "gamma" set both sides. Explicit tables are {"table": [[n, k, m], ...]}.
Json to_json(const TrimmingSchedule& schedule);
TrimmingSchedule schedule_from_json(const Json& j);

// Experiment document:
//   {"distribution": {...}, "schedule": {...}, "n": ..., "replications": ...,
//    "seed": ..., "x_grid": [...], "c": ..., "A": ..., "normalization": ...,
//    "tails": ..., "level": ..., "center_replications": ...}
// distribution, schedule, n and replications are required.
Json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const Json& j);

// FNV-1a over the canonical (key-sorted, compact) dump, as 16 hex digits.
std::string json_hash(const Json& j);
// json_hash of the resolved config.
std::string config_hash(const ExperimentConfig& config);

// Throws ConfigError naming the first key of `j` not in `allowed`.
void reject_unknown_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

Json to_json(const TrimPoint& trim);
Json to_json(const Normalizers& norm);
Json to_json(const PopulationFunctionals& f);
Json to_json(const WinsorizedMoments& w);
Json to_json(const ConditionReport& report);
Json to_json(const CenterEstimate& c);
Json to_json(const TailRow& row);
// Deterministic body only; runtime and worker count are left out.
Json to_json(const TailRatioReport& report);
Json to_json(const MillsReport& report);
Json to_json(const AuditReport& report);
Json to_json(const ExpectationInterval& ci);
Json to_json(const CoverageReport& report);
Json to_json(const BoundVerification& v);

// '# config_hash=<hash>' then the header
// x,count,p_hat,normal_tail,ratio,ci_lo,ci_hi,low_count_flag and one row per
// x, floats with 17 significant digits.
void write_tail_csv(std::ostream& out, const std::vector<TailRow>& rows, const std::string& hash);

}  // namespace trimlab
