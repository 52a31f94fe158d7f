#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "galoiscache/cache.hpp"
#include "galoiscache/stats.hpp"

namespace galoiscache {

enum class AttackKind { baseline_pp, galois_pp, collusion };

std::string to_string(AttackKind kind);
AttackKind parse_attack_kind(const std::string& text);

struct AttackScenario {
  AttackKind kind = AttackKind::galois_pp;
  CacheConfig cache;
  DomainId victim_domain = 2;
  // baseline_pp / galois_pp: {adversary}. collusion: {prober, squeezer}.
  std::vector<DomainId> adversary_domains{1};
  std::uint32_t victim_target_set = 0;
  // Draw the victim set uniformly per trial instead of using victim_target_set.
  bool randomize_victim_set = false;
  // Set the adversary primes. Defaults: victim_target_set for baseline_pp,
  // 0 for galois_pp. Unused by collusion.
  std::optional<std::uint32_t> adversary_set;
  // collusion: squeezer set left unfilled. Default: highest set index.
  std::optional<std::uint32_t> unfilled_set;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  double victim_access_probability = 1.0;
  // Random accesses injected by a noise domain after every protocol step.
  std::uint32_t noise_accesses = 0;
  std::optional<DomainId> noise_domain;
  unsigned threads = 1;
  bool record_trials = false;

  // Throws ScenarioError on an inconsistent scenario.
  void validate() const;

  std::uint32_t resolved_adversary_set() const;
  std::uint32_t resolved_unfilled_set() const;
  DomainId resolved_noise_domain() const;
};

// Per-trial seeds: the cache RNG and the scenario RNG (victim activity,
// victim set, noise) are both derived from seed + trial_index.
std::uint64_t trial_cache_seed(std::uint64_t base_seed, std::uint64_t trial_index);
std::uint64_t trial_scenario_seed(std::uint64_t base_seed, std::uint64_t trial_index);

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint32_t victim_set = 0;
  bool victim_active = false;
  bool fired = false;
  bool correct = false;
  std::uint32_t probe_misses = 0;
  std::optional<std::uint32_t> inferred_set;
  // Way of the adversary line the victim evicted (simulator-internal).
  std::optional<std::uint32_t> evicted_way;
};

struct DetectionReport {
  AttackKind kind = AttackKind::galois_pp;
  std::string detection_rule;
  std::uint64_t trials = 0;
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t true_negatives = 0;
  std::uint64_t victim_active_trials = 0;
  // true_positives / trials, with a 95% Wilson interval.
  double detection_rate = 0.0;
  Interval detection_ci;
  // false_positives / inactive trials (0 when there are none).
  double false_positive_rate = 0.0;

  // Histogram of probe miss counts, index = number of misses.
  std::vector<std::uint64_t> miss_count_histogram;
  // galois_pp / collusion: way where the victim evicted the adversary's
  // line, over trials where that happened.
  std::vector<std::uint64_t> evicted_way_histogram;
  // Evictions that did not land on the way predicted by the intersection
  // solver. Zero unless noise is enabled.
  std::uint64_t way_mismatches = 0;
  // collusion: trials where some prober set showed all misses, and how many
  // of those inferred the true victim set.
  std::uint64_t fired = 0;
  std::uint64_t correct_inferences = 0;
  // Row: true victim set, column: inferred set (collusion) or way of the
  // first probe miss (galois_pp). Empty for baseline_pp.
  std::vector<std::vector<std::uint64_t>> per_set_confusion;
  std::vector<TrialRecord> trial_records;

  void merge(const DetectionReport& other);
  void finalize();
};

// One trial of the GaloisCache Prime+Probe protocol, stepwise:
//   background: victim fills all of its sets
//   prime:      adversary loads its set until a full pass hits
//   victim:     victim (when active) loads a fresh line of its target set
//   probe:      adversary reloads its set and counts misses
class GaloisPrimeProbeTrial {
 public:
  GaloisPrimeProbeTrial(const AttackScenario& sc, std::uint64_t trial_index);

  void background();
  void prime();
  void victim_access();
  TrialRecord probe();
  TrialRecord run();

  const Cache& cache() const noexcept { return cache_; }
  bool victim_active() const noexcept { return record_.victim_active; }
  // Way predicted for the eviction of an adversary line.
  std::uint32_t expected_way() const;
  std::vector<Address> adversary_lines() const;

 private:
  void inject_noise();

  const AttackScenario& sc_;
  Cache cache_;
  std::mt19937_64 rng_;
  DomainId adversary_;
  std::uint32_t adversary_set_;
  TrialRecord record_;
};

// One trial of the two-domain collusion attack:
//   prime:   the prober fills every one of its sets
//   squeeze: the squeezer fills all its sets but one, leaving the prober
//            exactly one line per set
//   victim:  victim (when active) loads a fresh line of its target set
//   probe:   the prober reloads everything, surviving line of each set first;
//            a set with all misses names the victim set
class CollusionTrial {
 public:
  CollusionTrial(const AttackScenario& sc, std::uint64_t trial_index);

  void prime();
  void squeeze();
  void victim_access();
  TrialRecord probe();
  TrialRecord run();

  const Cache& cache() const noexcept { return cache_; }
  bool victim_active() const noexcept { return record_.victim_active; }
  // Misses per prober set from the last probe.
  const std::vector<std::uint32_t>& set_misses() const noexcept { return set_misses_; }
  // Way of the prober's surviving line in each of its sets.
  std::uint32_t surviving_way(std::uint32_t prober_set) const;
  // Victim set whose candidates include the prober's way-w cell of prober_set.
  std::uint32_t infer_victim_set(std::uint32_t prober_set, std::uint32_t way) const;

 private:
  void inject_noise();

  const AttackScenario& sc_;
  Cache cache_;
  std::mt19937_64 rng_;
  DomainId prober_, squeezer_;
  std::uint32_t unfilled_;
  TrialRecord record_;
  std::vector<std::uint32_t> set_misses_;
};

DetectionReport run_baseline_prime_probe(const AttackScenario& sc);
DetectionReport run_galois_prime_probe(const AttackScenario& sc);
DetectionReport run_collusion_attack(const AttackScenario& sc);
DetectionReport run_attack(const AttackScenario& sc);

struct SweepRow {
  unsigned n = 0;
  std::uint32_t order = 0;
  // victim_access_probability / 2^n
  double theoretical = 0.0;
  double empirical = 0.0;
  Interval ci;
  DetectionReport report;
};

// Runs `kind` (galois_pp or collusion) over GF(2^n) for n in [n_min, n_max]
// with the default modulus and a=b=1, c=0. Empty when trials == 0.
std::vector<SweepRow> sweep_detection_vs_field(AttackKind kind, unsigned n_min, unsigned n_max, std::uint64_t trials,
                                               std::uint64_t seed, double victim_access_probability = 1.0,
                                               unsigned threads = 1);

struct LeakageTest {
  // Row per victim set, column per probe miss count.
  std::vector<std::vector<std::uint64_t>> miss_counts;
  ChiSquareResult chi_square;
};

// Runs galois_pp once per victim set (disjoint seed ranges) and tests whether
// the adversary's probe miss-count distribution depends on the victim set.
LeakageTest galois_pp_leakage_test(const AttackScenario& templ);

}  // namespace galoiscache
