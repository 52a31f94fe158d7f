#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "galoiscache/attack.hpp"
#include "galoiscache/circuit.hpp"
#include "galoiscache/errors.hpp"
#include "galoiscache/report.hpp"
#include "galoiscache/skew.hpp"
#include "galoiscache/trace.hpp"

namespace galoiscache::cli {

namespace {

struct Options {
  // field / skew
  std::uint32_t p = 2;
  unsigned n = 2;
  std::optional<std::uint32_t> modulus;
  Element a = 1, b = 1, c = 0;
  // run
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  std::string format = "json";
  std::string output;
  bool no_timestamp = false;
  unsigned threads = 1;

  // simulate / baseline geometry
  std::string trace;
  std::string cache_kind = "galois";
  std::uint32_t sets = 4, ways = 4;
  std::string replacement;
  unsigned offset_bits = 6;
  unsigned stack_bits = 0;

  // attack
  DomainId victim = 2;
  std::vector<DomainId> adversaries;
  std::uint32_t victim_set = 0;
  bool random_victim_set = false;
  std::optional<std::uint32_t> adversary_set;
  std::optional<std::uint32_t> unfilled_set;
  double victim_prob = 1.0;
  std::uint32_t noise = 0;
  std::optional<DomainId> noise_domain;
  std::string trials_csv;
  bool include_trials = false;
  std::string sweep_kind = "galois-pp";
  unsigned n_min = 2, n_max = 4;

  // cost
  std::string netlist_dir;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  std::shared_ptr<const SkewParams> skew() const {
    return std::make_shared<const SkewParams>(FieldSpec::make(opt_.p, opt_.n, opt_.modulus), opt_.a, opt_.b, opt_.c);
  }

  CacheConfig simulate_cache() const {
    CacheConfig cfg;
    const CacheKind kind = parse_cache_kind(opt_.cache_kind);
    if (kind == CacheKind::conventional) {
      cfg = CacheConfig::conventional(opt_.sets, opt_.ways, parse_replacement(opt_.replacement.empty() ? "lru" : opt_.replacement), opt_.seed);
    } else {
      cfg = kind == CacheKind::galois ? CacheConfig::galois(skew(), opt_.seed)
                                      : CacheConfig::stacked(skew(), opt_.stack_bits, opt_.seed);
      if (!opt_.replacement.empty()) cfg.replacement = parse_replacement(opt_.replacement);
    }
    cfg.line_offset_bits = opt_.offset_bits;
    cfg.validate();
    return cfg;
  }

  AttackScenario scenario(AttackKind kind) const {
    AttackScenario sc;
    sc.kind = kind;
    if (kind == AttackKind::baseline_pp) {
      sc.cache = CacheConfig::conventional(opt_.sets, opt_.ways,
                                           parse_replacement(opt_.replacement.empty() ? "lru" : opt_.replacement), opt_.seed);
    } else {
      sc.cache = CacheConfig::galois(skew(), opt_.seed);
    }
    sc.cache.line_offset_bits = opt_.offset_bits;
    sc.victim_domain = opt_.victim;
    if (!opt_.adversaries.empty())
      sc.adversary_domains = opt_.adversaries;
    else
      sc.adversary_domains = kind == AttackKind::collusion ? std::vector<DomainId>{1, 0} : std::vector<DomainId>{1};
    sc.victim_target_set = opt_.victim_set;
    sc.randomize_victim_set = opt_.random_victim_set;
    sc.adversary_set = opt_.adversary_set;
    sc.unfilled_set = opt_.unfilled_set;
    sc.trials = opt_.trials;
    sc.seed = opt_.seed;
    sc.victim_access_probability = opt_.victim_prob;
    sc.noise_accesses = opt_.noise;
    sc.noise_domain = opt_.noise_domain;
    sc.threads = opt_.threads;
    sc.record_trials = opt_.include_trials || !opt_.trials_csv.empty();
    sc.validate();
    return sc;
  }

  // Wraps `result` with the provenance envelope and writes it out.
  void emit(const std::string& command, Json config, Json result, const std::string& csv) const {
    std::string text;
    if (opt_.format == "csv") {
      text = csv;
    } else {
      Json doc{{"tool", "galoiscache"}, {"schema_version", kReportSchemaVersion}, {"command", command}};
      doc["config"] = std::move(config);
      doc["result"] = std::move(result);
      if (!opt_.no_timestamp) doc["timestamp"] = utc_timestamp();
      text = doc.dump(2) + "\n";
    }
    write_text(opt_.output, text);
  }

  void write_text(const std::string& path, const std::string& text) const {
    if (path.empty() || path == "-") {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    f << text;
  }

  Json run_config() const { return Json{{"seed", opt_.seed}, {"trials", opt_.trials}, {"format", opt_.format}}; }

  int verify() const {
    const auto sp = skew();
    const auto diag = verify_diagonalization(*sp);
    const auto bij = verify_way_bijection(*sp);
    Json config{{"skew", to_json(*sp)}};
    Json result{{"ok", diag.ok() && bij.ok()}, {"diagonalization", to_json(diag)}, {"way_bijection", to_json(bij)}};
    emit("verify", std::move(config), std::move(result), verification_csv(diag, bij));
    return diag.ok() && bij.ok() ? kExitOk : kExitViolations;
  }

  int simulate() const {
    std::ifstream in(opt_.trace);
    if (!in) throw ConfigError("cannot open trace '" + opt_.trace + "'");
    const auto trace = parse_trace(in);
    Cache cache(simulate_cache());
    replay_trace(cache, trace);
    const auto stats = cache.stats();
    DomainStats total;
    for (const auto& [d, st] : stats) {
      total.hits += st.hits;
      total.misses += st.misses;
      total.evictions_caused += st.evictions_caused;
      total.self_evictions += st.self_evictions;
    }
    Json config{{"cache", to_json(cache.config())}, {"trace", std::filesystem::path(opt_.trace).filename().string()}};
    Json result{{"accesses", trace.size()}, {"domains", to_json(stats)}, {"total", to_json(total)}};
    emit("simulate", std::move(config), std::move(result), stats_csv(stats));
    return kExitOk;
  }

  int attack(AttackKind kind) const {
    const auto sc = scenario(kind);
    const auto rep = run_attack(sc);
    if (!opt_.trials_csv.empty()) write_text(opt_.trials_csv, trials_csv(rep.trial_records));
    Json config = run_config();
    config["scenario"] = to_json(sc);
    emit("attack " + to_string(kind), std::move(config), to_json(rep, opt_.include_trials), detection_csv(rep));
    return kExitOk;
  }

  int sweep() const {
    const AttackKind kind = parse_attack_kind(opt_.sweep_kind);
    const auto rows = sweep_detection_vs_field(kind, opt_.n_min, opt_.n_max, opt_.trials, opt_.seed, opt_.victim_prob,
                                               opt_.threads);
    Json config = run_config();
    config.update(Json{{"kind", to_string(kind)},
                       {"n_min", opt_.n_min},
                       {"n_max", opt_.n_max},
                       {"victim_access_probability", opt_.victim_prob}});
    emit("attack sweep", std::move(config), to_json(rows), sweep_csv(rows));
    return kExitOk;
  }

  int cost() const {
    const auto sp = skew();
    const auto rep = permutation_cost(*sp);
    if (!opt_.netlist_dir.empty()) {
      std::filesystem::create_directories(opt_.netlist_dir);
      for (Element w = 0; w < sp->order(); ++w) {
        const auto net = matrix_to_network(const_mul_matrix(sp->field(), w));
        const std::string name = "way_" + std::to_string(w);
        write_text((std::filesystem::path(opt_.netlist_dir) / (name + ".net")).string(), emit_netlist(net, name));
      }
    }
    emit("cost", Json{{"skew", to_json(*sp)}}, to_json(rep), cost_csv(rep));
    return kExitOk;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"GaloisCache simulator: skew verification, cache simulation, attack experiments, XOR cost"};
  app.name(args.empty() ? "galoiscache" : std::filesystem::path(args[0]).filename().string());
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file read before the command line; flags win over file entries");

  app.add_option("--p", opt.p, "Field characteristic (prime)")->capture_default_str();
  app.add_option("--n", opt.n, "Extension degree; the cache is p^n x p^n")->capture_default_str();
  app.add_option("--modulus", opt.modulus, "Reducing polynomial as an integer (0b/0x accepted); default per n");
  app.add_option("--a", opt.a, "Skew constant a (non-zero)")->capture_default_str();
  app.add_option("--b", opt.b, "Skew constant b (non-zero)")->capture_default_str();
  app.add_option("--c", opt.c, "Skew constant c")->capture_default_str();
  app.add_option("--seed", opt.seed, "Base seed")->capture_default_str();
  app.add_option("--trials", opt.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--output", opt.output, "Write the report here instead of stdout");
  app.add_flag("--no-timestamp", opt.no_timestamp, "Leave the timestamp out of JSON reports");
  app.add_option("--threads", opt.threads, "Worker threads for attack trials")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Exhaustively check diagonalization and per-way bijection");

  auto* simulate = app.add_subcommand("simulate", "Replay a trace file and report per-domain statistics");
  simulate->add_option("--trace", opt.trace, "Trace file: '<domain> <R|W> <hex address>' per line")->required();
  simulate->add_option("--kind", opt.cache_kind, "galois | conventional | stacked-galois")->capture_default_str();
  simulate->add_option("--sets", opt.sets, "Sets (conventional)")->capture_default_str();
  simulate->add_option("--ways", opt.ways, "Ways (conventional)")->capture_default_str();
  simulate->add_option("--replacement", opt.replacement, "lru | random");
  simulate->add_option("--offset-bits", opt.offset_bits, "Line offset bits")->capture_default_str();
  simulate->add_option("--stack-bits", opt.stack_bits, "log2 of stacked instances")->capture_default_str();

  auto* attack = app.add_subcommand("attack", "Run a Prime+Probe experiment");
  attack->require_subcommand(1);
  attack->add_option("--victim", opt.victim, "Victim domain id")->capture_default_str();
  attack->add_option("--adversary", opt.adversaries, "Adversary domain id(s); collusion takes prober then squeezer");
  attack->add_option("--victim-set", opt.victim_set, "Victim target set")->capture_default_str();
  attack->add_flag("--random-victim-set", opt.random_victim_set, "Draw the victim set per trial");
  attack->add_option("--adversary-set", opt.adversary_set, "Set primed by the adversary");
  attack->add_option("--unfilled-set", opt.unfilled_set, "Collusion: squeezer set left unfilled (default highest)");
  attack->add_option("--victim-prob", opt.victim_prob, "Probability that the victim accesses in a trial")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  attack->add_option("--noise", opt.noise, "Random noise accesses after each step")->capture_default_str();
  attack->add_option("--noise-domain", opt.noise_domain, "Domain issuing noise accesses");
  attack->add_option("--sets", opt.sets, "Sets (baseline-pp)")->capture_default_str();
  attack->add_option("--ways", opt.ways, "Ways (baseline-pp)")->capture_default_str();
  attack->add_option("--replacement", opt.replacement, "Baseline replacement: lru | random");
  attack->add_option("--trials-csv", opt.trials_csv, "Write one CSV row per trial to this file");
  attack->add_flag("--include-trials", opt.include_trials, "Embed per-trial records in the JSON report");
  auto* baseline = attack->add_subcommand("baseline-pp", "Prime+Probe on a conventional set-associative cache");
  auto* galois_pp = attack->add_subcommand("galois-pp", "Prime+Probe attempt on a GaloisCache");
  auto* collusion = attack->add_subcommand("collusion", "Two-domain collusion attack on a GaloisCache");
  auto* sweep = attack->add_subcommand("sweep", "Detection rate against field size");
  sweep->add_option("--sweep-kind", opt.sweep_kind, "galois-pp | collusion")->capture_default_str();
  sweep->add_option("--n-min", opt.n_min, "Smallest n")->capture_default_str();
  sweep->add_option("--n-max", opt.n_max, "Largest n")->capture_default_str();

  auto* cost = app.add_subcommand("cost", "XOR-gate cost of the skewing function");
  cost->add_option("--emit-netlists", opt.netlist_dir, "Write one netlist per way constant into this directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    Runner runner(opt, out);
    if (*verify) return runner.verify();
    if (*simulate) return runner.simulate();
    if (*cost) return runner.cost();
    if (*baseline) return runner.attack(AttackKind::baseline_pp);
    if (*galois_pp) return runner.attack(AttackKind::galois_pp);
    if (*collusion) return runner.attack(AttackKind::collusion);
    if (*sweep) return runner.sweep();
  } catch (const TraceError& e) {
    err << "trace error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {  // ConfigError, ScenarioError, UnsupportedField
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace galoiscache::cli
