#include "galoiscache/report.hpp"

#include <sstream>

namespace galoiscache {

namespace {

Json interval_json(const Interval& iv) { return Json{{"low", iv.low}, {"high", iv.high}}; }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

Json to_json(const FieldSpec& f) {
  return Json{{"name", f.name()}, {"p", f.p()}, {"n", f.n()}, {"modulus", f.modulus()}, {"order", f.order()}};
}

Json to_json(const SkewParams& sp) {
  return Json{{"field", to_json(sp.field())}, {"a", sp.a()}, {"b", sp.b()}, {"c", sp.c()}};
}

Json to_json(const CacheConfig& cfg) {
  Json j{{"kind", to_string(cfg.kind)},
         {"num_sets", cfg.num_sets},
         {"num_ways", cfg.num_ways},
         {"replacement", to_string(cfg.replacement)},
         {"seed", cfg.seed},
         {"line_offset_bits", cfg.line_offset_bits},
         {"stack_bits", cfg.stack_bits}};
  j["skew"] = cfg.skew ? to_json(*cfg.skew) : Json(nullptr);
  return j;
}

Json to_json(const AttackScenario& sc) {
  return Json{{"kind", to_string(sc.kind)},
              {"cache", to_json(sc.cache)},
              {"victim_domain", sc.victim_domain},
              {"adversary_domains", sc.adversary_domains},
              {"victim_target_set", sc.victim_target_set},
              {"randomize_victim_set", sc.randomize_victim_set},
              {"adversary_set", sc.kind == AttackKind::collusion ? Json(nullptr) : Json(sc.resolved_adversary_set())},
              {"unfilled_set", sc.kind == AttackKind::collusion ? Json(sc.resolved_unfilled_set()) : Json(nullptr)},
              {"trials", sc.trials},
              {"seed", sc.seed},
              {"victim_access_probability", sc.victim_access_probability},
              {"noise_accesses", sc.noise_accesses},
              {"noise_domain", sc.noise_accesses ? Json(sc.resolved_noise_domain()) : Json(nullptr)}};
}

Json to_json(const DomainStats& st) {
  return Json{{"hits", st.hits},
              {"misses", st.misses},
              {"evictions_caused", st.evictions_caused},
              {"self_evictions", st.self_evictions}};
}

Json to_json(const std::map<DomainId, DomainStats>& stats) {
  Json arr = Json::array();
  for (const auto& [d, st] : stats) {
    Json row{{"domain", d}};
    row.update(to_json(st));
    arr.push_back(std::move(row));
  }
  return arr;
}

std::map<DomainId, DomainStats> stats_from_json(const Json& j) {
  std::map<DomainId, DomainStats> out;
  for (const auto& row : j) {
    DomainStats st;
    st.hits = row.at("hits").get<std::uint64_t>();
    st.misses = row.at("misses").get<std::uint64_t>();
    st.evictions_caused = row.at("evictions_caused").get<std::uint64_t>();
    st.self_evictions = row.at("self_evictions").get<std::uint64_t>();
    out.emplace(row.at("domain").get<DomainId>(), st);
  }
  return out;
}

Json to_json(const DiagonalReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations)
    v.push_back(Json{{"t", x.t},
                     {"t2", x.t2},
                     {"s", x.s},
                     {"s2", x.s2},
                     {"intersections", x.intersections},
                     {"witness", optional_json(x.witness)},
                     {"solver_way", optional_json(x.solver_way)}});
  return Json{{"checked", rep.checked}, {"violation_count", rep.violation_count}, {"violations", v}};
}

Json to_json(const BijectionReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) v.push_back(Json{{"t", x.t}, {"w", x.w}, {"distinct_images", x.distinct_images}});
  return Json{{"checked", rep.checked}, {"violation_count", rep.violation_count}, {"violations", v}};
}

Json to_json(const CostReport& rep) {
  Json ways = Json::array();
  for (const auto& w : rep.ways) ways.push_back(Json{{"w", w.w}, {"xor_count", w.xor_count}, {"depth", w.depth}});
  return Json{{"field", to_json(rep.field)},
              {"a", rep.a},
              {"b", rep.b},
              {"c", rep.c},
              {"ways", ways},
              {"a_path_xor_count", rep.a_path_xor_count},
              {"a_path_depth", rep.a_path_depth},
              {"adder_xor_count", rep.adder_xor_count},
              {"total_xor_count", rep.total_xor_count},
              {"critical_path_depth", rep.critical_path_depth}};
}

Json to_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back(Json{{"n", r.n},
                       {"order", r.order},
                       {"theoretical", r.theoretical},
                       {"empirical", r.empirical},
                       {"ci", interval_json(r.ci)},
                       {"report", to_json(r.report)}});
  return arr;
}

Json to_json(const TrialRecord& rec) {
  return Json{{"index", rec.index},
              {"victim_set", rec.victim_set},
              {"victim_active", rec.victim_active},
              {"fired", rec.fired},
              {"correct", rec.correct},
              {"probe_misses", rec.probe_misses},
              {"inferred_set", optional_json(rec.inferred_set)},
              {"evicted_way", optional_json(rec.evicted_way)}};
}

Json to_json(const DetectionReport& rep, bool include_trials) {
  Json j{{"kind", to_string(rep.kind)},
         {"detection_rule", rep.detection_rule},
         {"trials", rep.trials},
         {"true_positives", rep.true_positives},
         {"false_positives", rep.false_positives},
         {"false_negatives", rep.false_negatives},
         {"true_negatives", rep.true_negatives},
         {"victim_active_trials", rep.victim_active_trials},
         {"detection_rate", rep.detection_rate},
         {"detection_ci", interval_json(rep.detection_ci)},
         {"false_positive_rate", rep.false_positive_rate},
         {"miss_count_histogram", rep.miss_count_histogram},
         {"evicted_way_histogram", rep.evicted_way_histogram},
         {"way_mismatches", rep.way_mismatches},
         {"fired", rep.fired},
         {"correct_inferences", rep.correct_inferences},
         {"per_set_confusion", rep.per_set_confusion}};
  if (include_trials) {
    Json t = Json::array();
    for (const auto& r : rep.trial_records) t.push_back(to_json(r));
    j["trial_records"] = std::move(t);
  }
  return j;
}

DetectionReport detection_report_from_json(const Json& j) {
  DetectionReport r;
  r.kind = parse_attack_kind(j.at("kind").get<std::string>());
  r.detection_rule = j.at("detection_rule").get<std::string>();
  r.trials = j.at("trials").get<std::uint64_t>();
  r.true_positives = j.at("true_positives").get<std::uint64_t>();
  r.false_positives = j.at("false_positives").get<std::uint64_t>();
  r.false_negatives = j.at("false_negatives").get<std::uint64_t>();
  r.true_negatives = j.at("true_negatives").get<std::uint64_t>();
  r.victim_active_trials = j.at("victim_active_trials").get<std::uint64_t>();
  r.detection_rate = j.at("detection_rate").get<double>();
  r.detection_ci = {j.at("detection_ci").at("low").get<double>(), j.at("detection_ci").at("high").get<double>()};
  r.false_positive_rate = j.at("false_positive_rate").get<double>();
  r.miss_count_histogram = j.at("miss_count_histogram").get<std::vector<std::uint64_t>>();
  r.evicted_way_histogram = j.at("evicted_way_histogram").get<std::vector<std::uint64_t>>();
  r.way_mismatches = j.at("way_mismatches").get<std::uint64_t>();
  r.fired = j.at("fired").get<std::uint64_t>();
  r.correct_inferences = j.at("correct_inferences").get<std::uint64_t>();
  r.per_set_confusion = j.at("per_set_confusion").get<std::vector<std::vector<std::uint64_t>>>();
  if (j.contains("trial_records")) {
    for (const auto& t : j.at("trial_records")) {
      TrialRecord rec;
      rec.index = t.at("index").get<std::uint64_t>();
      rec.victim_set = t.at("victim_set").get<std::uint32_t>();
      rec.victim_active = t.at("victim_active").get<bool>();
      rec.fired = t.at("fired").get<bool>();
      rec.correct = t.at("correct").get<bool>();
      rec.probe_misses = t.at("probe_misses").get<std::uint32_t>();
      rec.inferred_set = optional_from<std::uint32_t>(t.at("inferred_set"));
      rec.evicted_way = optional_from<std::uint32_t>(t.at("evicted_way"));
      r.trial_records.push_back(rec);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// CSV

std::string detection_csv(const DetectionReport& r) {
  std::ostringstream os;
  os << "kind,trials,true_positives,false_positives,false_negatives,true_negatives,victim_active_trials,"
        "detection_rate,ci_low,ci_high,false_positive_rate,fired,correct_inferences,way_mismatches\n";
  os << to_string(r.kind) << ',' << r.trials << ',' << r.true_positives << ',' << r.false_positives << ','
     << r.false_negatives << ',' << r.true_negatives << ',' << r.victim_active_trials << ','
     << fmt_double(r.detection_rate) << ',' << fmt_double(r.detection_ci.low) << ','
     << fmt_double(r.detection_ci.high) << ',' << fmt_double(r.false_positive_rate) << ',' << r.fired << ','
     << r.correct_inferences << ',' << r.way_mismatches << '\n';
  return os.str();
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "trial,victim_set,victim_active,fired,correct,probe_misses,inferred_set,evicted_way\n";
  for (const auto& t : records) {
    os << t.index << ',' << t.victim_set << ',' << t.victim_active << ',' << t.fired << ',' << t.correct << ','
       << t.probe_misses << ',';
    if (t.inferred_set) os << *t.inferred_set;
    os << ',';
    if (t.evicted_way) os << *t.evicted_way;
    os << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n,order,theoretical,empirical,ci_low,ci_high,trials\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.order << ',' << fmt_double(r.theoretical) << ',' << fmt_double(r.empirical) << ','
       << fmt_double(r.ci.low) << ',' << fmt_double(r.ci.high) << ',' << r.report.trials << '\n';
  return os.str();
}

std::string stats_csv(const std::map<DomainId, DomainStats>& stats) {
  std::ostringstream os;
  os << "domain,hits,misses,evictions_caused,self_evictions\n";
  for (const auto& [d, st] : stats)
    os << d << ',' << st.hits << ',' << st.misses << ',' << st.evictions_caused << ',' << st.self_evictions << '\n';
  return os.str();
}

std::string cost_csv(const CostReport& rep) {
  std::ostringstream os;
  os << "w,xor_count,depth\n";
  for (const auto& w : rep.ways) os << w.w << ',' << w.xor_count << ',' << w.depth << '\n';
  return os.str();
}

std::string verification_csv(const DiagonalReport& diag, const BijectionReport& bij) {
  std::ostringstream os;
  os << "check,checked,violations\n";
  os << "diagonalization," << diag.checked << ',' << diag.violation_count << '\n';
  os << "way_bijection," << bij.checked << ',' << bij.violation_count << '\n';
  return os.str();
}

}  // namespace galoiscache
