#include "galoiscache/attack.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "galoiscache/errors.hpp"

namespace galoiscache {

namespace {

constexpr unsigned kMaxPrimePasses = 10000;
// Tag of the victim's measured access; far above any tag used for filling.
constexpr std::uint64_t kFreshTag = 1ull << 24;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool draw_bernoulli(std::mt19937_64& rng, double p) {
  if (p >= 1.0) {
    rng();
    return true;
  }
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

Address line_address(const CacheConfig& cfg, std::uint32_t set, std::uint64_t tag) {
  return compose_address(cfg, AddressParts{tag, set, 0});
}

CacheConfig with_seed(CacheConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return cfg;
}

// Accesses `lines` repeatedly until one full pass hits.
void load_until_resident(Cache& cache, DomainId domain, const std::vector<Address>& lines) {
  for (unsigned pass = 0; pass < kMaxPrimePasses; ++pass) {
    bool all_hit = true;
    for (Address a : lines) all_hit = cache.access(domain, a).hit && all_hit;
    if (all_hit) return;
  }
  throw std::runtime_error("prime did not settle within " + std::to_string(kMaxPrimePasses) + " passes");
}

void inject_noise(Cache& cache, std::mt19937_64& rng, const AttackScenario& sc) {
  if (sc.noise_accesses == 0) return;
  const DomainId noise = sc.resolved_noise_domain();
  const auto& cfg = cache.config();
  for (std::uint32_t i = 0; i < sc.noise_accesses; ++i) {
    const auto set = static_cast<std::uint32_t>(rng() % cfg.num_sets);
    const std::uint64_t tag = rng() % (4ull * cfg.num_ways);
    cache.access(noise, line_address(cfg, set, tag));
  }
}

void check_domain(const AttackScenario& sc, DomainId d, const char* role) {
  if (d >= sc.cache.max_domains())
    throw ScenarioError(std::string(role) + " domain " + std::to_string(d) + " exceeds the " +
                        std::to_string(sc.cache.max_domains()) + " domains the cache admits");
}

std::uint32_t pick_victim_set(const AttackScenario& sc, std::mt19937_64& rng) {
  const std::uint64_t draw = rng();
  return sc.randomize_victim_set ? static_cast<std::uint32_t>(draw % sc.cache.num_sets) : sc.victim_target_set;
}

}  // namespace

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::baseline_pp: return "baseline-pp";
    case AttackKind::galois_pp: return "galois-pp";
    case AttackKind::collusion: return "collusion";
  }
  return "?";
}

AttackKind parse_attack_kind(const std::string& text) {
  if (text == "baseline-pp") return AttackKind::baseline_pp;
  if (text == "galois-pp") return AttackKind::galois_pp;
  if (text == "collusion") return AttackKind::collusion;
  throw ScenarioError("unknown attack kind '" + text + "'");
}

std::uint64_t trial_cache_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return splitmix64(base_seed + trial_index);
}

std::uint64_t trial_scenario_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(base_seed + trial_index) ^ 0x5ca1ab1e0ddba11ull);
}

// ---------------------------------------------------------------------------
// AttackScenario

void AttackScenario::validate() const {
  try {
    cache.validate();
  } catch (const ConfigError& e) {
    throw ScenarioError(e.what());
  }
  if (!(victim_access_probability >= 0.0 && victim_access_probability <= 1.0))
    throw ScenarioError("victim access probability must lie in [0, 1]");
  if (threads == 0) throw ScenarioError("need at least one thread");

  const bool galois = kind != AttackKind::baseline_pp;
  if (galois && cache.kind != CacheKind::galois) throw ScenarioError(to_string(kind) + " needs a galois cache");
  if (!galois && cache.kind != CacheKind::conventional) throw ScenarioError("baseline-pp needs a conventional cache");

  const std::size_t want = kind == AttackKind::collusion ? 2 : 1;
  if (adversary_domains.size() != want)
    throw ScenarioError(to_string(kind) + " needs exactly " + std::to_string(want) + " adversary domain(s)");

  check_domain(*this, victim_domain, "victim");
  std::vector<DomainId> all{victim_domain};
  for (DomainId d : adversary_domains) {
    check_domain(*this, d, "adversary");
    all.push_back(d);
  }
  if (noise_accesses > 0) {
    const DomainId noise = resolved_noise_domain();
    check_domain(*this, noise, "noise");
    all.push_back(noise);
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw ScenarioError("domain ids must be distinct");

  if (victim_target_set >= cache.num_sets) throw ScenarioError("victim target set out of range");
  if (adversary_set && *adversary_set >= cache.num_sets) throw ScenarioError("adversary set out of range");
  if (unfilled_set && *unfilled_set >= cache.num_sets) throw ScenarioError("unfilled set out of range");
}

std::uint32_t AttackScenario::resolved_adversary_set() const {
  if (adversary_set) return *adversary_set;
  return kind == AttackKind::baseline_pp ? victim_target_set : 0;
}

std::uint32_t AttackScenario::resolved_unfilled_set() const {
  return unfilled_set.value_or(cache.num_sets - 1);
}

DomainId AttackScenario::resolved_noise_domain() const {
  if (noise_domain) return *noise_domain;
  DomainId d = 0;
  while (d == victim_domain || std::find(adversary_domains.begin(), adversary_domains.end(), d) != adversary_domains.end())
    ++d;
  return d;
}

// ---------------------------------------------------------------------------
// DetectionReport

void DetectionReport::merge(const DetectionReport& o) {
  auto add_hist = [](std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    if (dst.size() < src.size()) dst.resize(src.size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  };
  trials += o.trials;
  true_positives += o.true_positives;
  false_positives += o.false_positives;
  false_negatives += o.false_negatives;
  true_negatives += o.true_negatives;
  victim_active_trials += o.victim_active_trials;
  add_hist(miss_count_histogram, o.miss_count_histogram);
  add_hist(evicted_way_histogram, o.evicted_way_histogram);
  way_mismatches += o.way_mismatches;
  fired += o.fired;
  correct_inferences += o.correct_inferences;
  if (per_set_confusion.size() < o.per_set_confusion.size()) per_set_confusion.resize(o.per_set_confusion.size());
  for (std::size_t r = 0; r < o.per_set_confusion.size(); ++r) add_hist(per_set_confusion[r], o.per_set_confusion[r]);
  trial_records.insert(trial_records.end(), o.trial_records.begin(), o.trial_records.end());
}

void DetectionReport::finalize() {
  detection_rate = trials ? static_cast<double>(true_positives) / static_cast<double>(trials) : 0.0;
  detection_ci = wilson_interval(true_positives, trials);
  const std::uint64_t negatives = false_positives + true_negatives;
  false_positive_rate = negatives ? static_cast<double>(false_positives) / static_cast<double>(negatives) : 0.0;
  std::sort(trial_records.begin(), trial_records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.index < b.index; });
}

namespace {

void tally(DetectionReport& rep, const TrialRecord& rec, std::optional<std::uint32_t> expected_way,
           std::optional<std::uint32_t> confusion_col, bool keep) {
  ++rep.trials;
  rep.victim_active_trials += rec.victim_active;
  if (rec.fired && rec.correct)
    ++rep.true_positives;
  else if (rec.fired)
    ++rep.false_positives;
  else if (rec.victim_active)
    ++rep.false_negatives;
  else
    ++rep.true_negatives;

  if (rep.miss_count_histogram.size() <= rec.probe_misses) rep.miss_count_histogram.resize(rec.probe_misses + 1, 0);
  ++rep.miss_count_histogram[rec.probe_misses];

  if (rec.evicted_way) {
    if (rep.evicted_way_histogram.size() <= *rec.evicted_way) rep.evicted_way_histogram.resize(*rec.evicted_way + 1, 0);
    ++rep.evicted_way_histogram[*rec.evicted_way];
    if (expected_way && *rec.evicted_way != *expected_way) ++rep.way_mismatches;
  }
  if (confusion_col) ++rep.per_set_confusion.at(rec.victim_set).at(*confusion_col);
  if (keep) rep.trial_records.push_back(rec);
}

// Runs trials [0, sc.trials) split over sc.threads workers. `one` fills a
// report with a single trial.
template <typename TrialFn>
DetectionReport run_trials(const AttackScenario& sc, DetectionReport proto, TrialFn one) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(sc.threads, std::max<std::uint64_t>(sc.trials, 1)));
  std::vector<DetectionReport> parts(workers, proto);
  auto work = [&](unsigned k) {
    const std::uint64_t lo = sc.trials * k / workers, hi = sc.trials * (k + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) one(parts[k], i);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work, k);
  }
  DetectionReport out = proto;
  for (const auto& p : parts) out.merge(p);
  out.finalize();
  return out;
}

DetectionReport make_proto(const AttackScenario& sc, std::string rule, bool confusion) {
  DetectionReport r;
  r.kind = sc.kind;
  r.detection_rule = std::move(rule);
  if (confusion)
    r.per_set_confusion.assign(sc.cache.num_sets, std::vector<std::uint64_t>(sc.cache.num_sets, 0));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Baseline Prime+Probe

DetectionReport run_baseline_prime_probe(const AttackScenario& sc) {
  if (sc.kind != AttackKind::baseline_pp) throw ScenarioError("scenario kind is not baseline-pp");
  sc.validate();
  const DomainId adversary = sc.adversary_domains.front();
  const std::uint32_t primed = sc.resolved_adversary_set();
  const auto proto = make_proto(sc, "at least one probe miss in the primed set, and the victim accessed that set", false);

  return run_trials(sc, proto, [&](DetectionReport& rep, std::uint64_t i) {
    Cache cache(with_seed(sc.cache, trial_cache_seed(sc.seed, i)));
    std::mt19937_64 rng(trial_scenario_seed(sc.seed, i));
    TrialRecord rec;
    rec.index = i;
    rec.victim_active = draw_bernoulli(rng, sc.victim_access_probability);
    rec.victim_set = pick_victim_set(sc, rng);

    std::vector<Address> lines(sc.cache.num_ways);
    for (std::uint32_t k = 0; k < sc.cache.num_ways; ++k) lines[k] = line_address(sc.cache, primed, k);
    load_until_resident(cache, adversary, lines);
    inject_noise(cache, rng, sc);
    if (rec.victim_active) cache.access(sc.victim_domain, line_address(sc.cache, rec.victim_set, kFreshTag));
    inject_noise(cache, rng, sc);
    // Most recent first, so an LRU refill only ever displaces the victim's line.
    const std::vector<Address> probe_order(lines.rbegin(), lines.rend());
    for (const auto& r : cache.observe_probe(adversary, probe_order)) rec.probe_misses += !r.hit;

    rec.fired = rec.probe_misses > 0;
    rec.correct = rec.fired && rec.victim_active && rec.victim_set == primed;
    tally(rep, rec, std::nullopt, std::nullopt, sc.record_trials);
  });
}

// ---------------------------------------------------------------------------
// GaloisCache Prime+Probe

GaloisPrimeProbeTrial::GaloisPrimeProbeTrial(const AttackScenario& sc, std::uint64_t trial_index)
    : sc_(sc),
      cache_(with_seed(sc.cache, trial_cache_seed(sc.seed, trial_index))),
      rng_(trial_scenario_seed(sc.seed, trial_index)),
      adversary_(sc.adversary_domains.at(0)),
      adversary_set_(sc.resolved_adversary_set()) {
  record_.index = trial_index;
  record_.victim_active = draw_bernoulli(rng_, sc.victim_access_probability);
  record_.victim_set = pick_victim_set(sc, rng_);
}

std::vector<Address> GaloisPrimeProbeTrial::adversary_lines() const {
  std::vector<Address> lines(sc_.cache.num_ways);
  for (std::uint32_t k = 0; k < sc_.cache.num_ways; ++k) lines[k] = line_address(sc_.cache, adversary_set_, k);
  return lines;
}

std::uint32_t GaloisPrimeProbeTrial::expected_way() const {
  return solve_intersection_way(*sc_.cache.skew, sc_.victim_domain, adversary_, record_.victim_set, adversary_set_);
}

void GaloisPrimeProbeTrial::inject_noise() { galoiscache::inject_noise(cache_, rng_, sc_); }

void GaloisPrimeProbeTrial::background() {
  // Per-way bijection: q lines into each of the victim's q sets fill every
  // cell without a single eviction.
  const std::uint32_t q = sc_.cache.num_sets;
  for (std::uint32_t s = 0; s < q; ++s)
    for (std::uint32_t k = 0; k < q; ++k) cache_.access(sc_.victim_domain, line_address(sc_.cache, s, k));
  inject_noise();
}

void GaloisPrimeProbeTrial::prime() {
  load_until_resident(cache_, adversary_, adversary_lines());
  inject_noise();
}

void GaloisPrimeProbeTrial::victim_access() {
  if (record_.victim_active) {
    const auto out = cache_.access(sc_.victim_domain, line_address(sc_.cache, record_.victim_set, kFreshTag));
    if (out.victim && out.victim->domain == adversary_) record_.evicted_way = out.way;
  }
  inject_noise();
}

TrialRecord GaloisPrimeProbeTrial::probe() {
  record_.probe_misses = 0;
  const auto lines = adversary_lines();
  for (const auto& r : cache_.observe_probe(adversary_, lines)) record_.probe_misses += !r.hit;
  record_.fired = record_.probe_misses > 0;
  record_.correct = record_.fired && record_.victim_active;
  return record_;
}

TrialRecord GaloisPrimeProbeTrial::run() {
  background();
  prime();
  victim_access();
  return probe();
}

DetectionReport run_galois_prime_probe(const AttackScenario& sc) {
  if (sc.kind != AttackKind::galois_pp) throw ScenarioError("scenario kind is not galois-pp");
  sc.validate();
  const auto proto = make_proto(sc, "at least one probe miss in the primed adversary set while the victim was active", true);
  return run_trials(sc, proto, [&](DetectionReport& rep, std::uint64_t i) {
    GaloisPrimeProbeTrial trial(sc, i);
    const TrialRecord rec = trial.run();
    tally(rep, rec, trial.expected_way(), rec.evicted_way, sc.record_trials);
  });
}

// ---------------------------------------------------------------------------
// Collusion

CollusionTrial::CollusionTrial(const AttackScenario& sc, std::uint64_t trial_index)
    : sc_(sc),
      cache_(with_seed(sc.cache, trial_cache_seed(sc.seed, trial_index))),
      rng_(trial_scenario_seed(sc.seed, trial_index)),
      prober_(sc.adversary_domains.at(0)),
      squeezer_(sc.adversary_domains.at(1)),
      unfilled_(sc.resolved_unfilled_set()) {
  record_.index = trial_index;
  record_.victim_active = draw_bernoulli(rng_, sc.victim_access_probability);
  record_.victim_set = pick_victim_set(sc, rng_);
}

void CollusionTrial::inject_noise() { galoiscache::inject_noise(cache_, rng_, sc_); }

std::uint32_t CollusionTrial::surviving_way(std::uint32_t prober_set) const {
  // The prober's line in way k was loaded as tag k; the one that survives the
  // squeeze sits where this set meets the squeezer's unfilled set.
  return solve_intersection_way(*sc_.cache.skew, prober_, squeezer_, prober_set, unfilled_);
}

std::uint32_t CollusionTrial::infer_victim_set(std::uint32_t prober_set, std::uint32_t way) const {
  for (std::uint32_t s = 0; s < sc_.cache.num_sets; ++s)
    if (solve_intersection_way(*sc_.cache.skew, sc_.victim_domain, prober_, s, prober_set) == way) return s;
  throw std::logic_error("no victim set meets the prober set at the given way");
}

void CollusionTrial::prime() {
  const std::uint32_t q = sc_.cache.num_sets;
  std::vector<Address> lines(q);
  for (std::uint32_t s = 0; s < q; ++s) {
    for (std::uint32_t k = 0; k < q; ++k) lines[k] = line_address(sc_.cache, s, k);
    load_until_resident(cache_, prober_, lines);
  }
  inject_noise();
}

void CollusionTrial::squeeze() {
  const std::uint32_t q = sc_.cache.num_sets;
  std::vector<Address> lines(q);
  for (std::uint32_t s = 0; s < q; ++s) {
    if (s == unfilled_) continue;
    for (std::uint32_t k = 0; k < q; ++k) lines[k] = line_address(sc_.cache, s, k);
    load_until_resident(cache_, squeezer_, lines);
  }
  inject_noise();
}

void CollusionTrial::victim_access() {
  if (record_.victim_active) {
    const auto out = cache_.access(sc_.victim_domain, line_address(sc_.cache, record_.victim_set, kFreshTag));
    if (out.victim && out.victim->domain == prober_) record_.evicted_way = out.way;
  }
  inject_noise();
}

TrialRecord CollusionTrial::probe() {
  const std::uint32_t q = sc_.cache.num_sets;
  set_misses_.assign(q, 0);
  record_.probe_misses = 0;
  record_.fired = false;
  record_.inferred_set.reset();

  std::vector<Address> lines;
  lines.reserve(q);
  for (std::uint32_t s = 0; s < q; ++s) {
    const std::uint32_t survivor = surviving_way(s);
    lines.clear();
    lines.push_back(line_address(sc_.cache, s, survivor));
    for (std::uint32_t k = 0; k < q; ++k)
      if (k != survivor) lines.push_back(line_address(sc_.cache, s, k));
    for (const auto& r : cache_.observe_probe(prober_, lines)) set_misses_[s] += !r.hit;
    record_.probe_misses += set_misses_[s];
    if (set_misses_[s] == q && !record_.fired) {
      record_.fired = true;
      record_.inferred_set = infer_victim_set(s, survivor);
    }
  }
  record_.correct = record_.fired && record_.victim_active && record_.inferred_set == record_.victim_set;
  return record_;
}

TrialRecord CollusionTrial::run() {
  prime();
  squeeze();
  victim_access();
  return probe();
}

DetectionReport run_collusion_attack(const AttackScenario& sc) {
  if (sc.kind != AttackKind::collusion) throw ScenarioError("scenario kind is not collusion");
  sc.validate();
  const auto proto = make_proto(sc, "some prober set shows all misses and maps to the true victim set", true);
  return run_trials(sc, proto, [&](DetectionReport& rep, std::uint64_t i) {
    CollusionTrial trial(sc, i);
    const TrialRecord rec = trial.run();
    const std::uint32_t expected = solve_intersection_way(*sc.cache.skew, sc.victim_domain, sc.adversary_domains[1],
                                                          rec.victim_set, sc.resolved_unfilled_set());
    rep.fired += rec.fired;
    rep.correct_inferences += rec.fired && rec.inferred_set == rec.victim_set;
    tally(rep, rec, expected, rec.inferred_set, sc.record_trials);
  });
}

DetectionReport run_attack(const AttackScenario& sc) {
  switch (sc.kind) {
    case AttackKind::baseline_pp: return run_baseline_prime_probe(sc);
    case AttackKind::galois_pp: return run_galois_prime_probe(sc);
    case AttackKind::collusion: return run_collusion_attack(sc);
  }
  throw ScenarioError("unknown attack kind");
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRow> sweep_detection_vs_field(AttackKind kind, unsigned n_min, unsigned n_max, std::uint64_t trials,
                                               std::uint64_t seed, double victim_access_probability,
                                               unsigned threads) {
  if (kind == AttackKind::baseline_pp) throw ScenarioError("sweep covers galois-pp and collusion only");
  if (n_min < 2 || n_max < n_min || n_max > FieldSpec::kMaxBinaryDegree)
    throw ScenarioError("sweep needs 2 <= n_min <= n_max <= " + std::to_string(FieldSpec::kMaxBinaryDegree));
  std::vector<SweepRow> rows;
  if (trials == 0) return rows;
  for (unsigned n = n_min; n <= n_max; ++n) {
    AttackScenario sc;
    sc.kind = kind;
    sc.cache = CacheConfig::galois(std::make_shared<const SkewParams>(FieldSpec::binary(n)));
    sc.victim_domain = 2;
    sc.adversary_domains = kind == AttackKind::collusion ? std::vector<DomainId>{1, 0} : std::vector<DomainId>{1};
    sc.trials = trials;
    sc.seed = seed;
    sc.victim_access_probability = victim_access_probability;
    sc.threads = threads;

    SweepRow row;
    row.n = n;
    row.order = 1u << n;
    row.theoretical = victim_access_probability / static_cast<double>(row.order);
    row.report = run_attack(sc);
    row.empirical = row.report.detection_rate;
    row.ci = row.report.detection_ci;
    rows.push_back(std::move(row));
  }
  return rows;
}

LeakageTest galois_pp_leakage_test(const AttackScenario& templ) {
  if (templ.kind != AttackKind::galois_pp) throw ScenarioError("leakage test runs on galois-pp scenarios");
  templ.validate();
  LeakageTest out;
  const std::uint32_t q = templ.cache.num_sets;
  std::size_t width = 0;
  for (std::uint32_t s = 0; s < q; ++s) {
    AttackScenario sc = templ;
    sc.victim_target_set = s;
    sc.randomize_victim_set = false;
    sc.record_trials = false;
    sc.seed = templ.seed + static_cast<std::uint64_t>(s) * templ.trials;
    auto rep = run_galois_prime_probe(sc);
    width = std::max(width, rep.miss_count_histogram.size());
    out.miss_counts.push_back(std::move(rep.miss_count_histogram));
  }
  for (auto& row : out.miss_counts) row.resize(width, 0);

  // Pool sparse tail columns so every expected count stays usable.
  auto col_total = [&](std::size_t c) {
    std::uint64_t t = 0;
    for (const auto& row : out.miss_counts) t += row[c];
    return t;
  };
  while (width > 2 && col_total(width - 1) < 5ull * q) {
    for (auto& row : out.miss_counts) {
      row[width - 2] += row[width - 1];
      row.pop_back();
    }
    --width;
  }
  out.chi_square = chi_square_independence(out.miss_counts);
  return out;
}

}  // namespace galoiscache
