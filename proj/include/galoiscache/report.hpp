#pragma once

#include <map>
#include <string>
#include <vector>

#include "galoiscache/attack.hpp"
#include "galoiscache/cache.hpp"
#include "galoiscache/circuit.hpp"
#include "galoiscache/skew.hpp"
#include "json.hpp"

namespace galoiscache {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

Json to_json(const FieldSpec& f);
Json to_json(const SkewParams& sp);
Json to_json(const CacheConfig& cfg);
Json to_json(const AttackScenario& sc);
Json to_json(const DomainStats& st);
Json to_json(const std::map<DomainId, DomainStats>& stats);
Json to_json(const DiagonalReport& rep);
Json to_json(const BijectionReport& rep);
Json to_json(const CostReport& rep);
Json to_json(const std::vector<SweepRow>& rows);
Json to_json(const TrialRecord& rec);
Json to_json(const DetectionReport& rep, bool include_trials = false);

// Inverse of to_json(DetectionReport); throws nlohmann::json::exception on
// a document that does not follow the schema.
DetectionReport detection_report_from_json(const Json& j);
std::map<DomainId, DomainStats> stats_from_json(const Json& j);

// CSV views. Column order is fixed; each header is the first line.
std::string detection_csv(const DetectionReport& rep);
std::string trials_csv(const std::vector<TrialRecord>& records);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string stats_csv(const std::map<DomainId, DomainStats>& stats);
std::string cost_csv(const CostReport& rep);
std::string verification_csv(const DiagonalReport& diag, const BijectionReport& bij);

}  // namespace galoiscache
