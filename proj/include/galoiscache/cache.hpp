#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "galoiscache/skew.hpp"

namespace galoiscache {

using DomainId = std::uint32_t;
using Address = std::uint64_t;

enum class CacheKind { galois, conventional, stacked_galois };
enum class Replacement { random, lru };

std::string to_string(CacheKind kind);
std::string to_string(Replacement policy);
CacheKind parse_cache_kind(const std::string& text);
Replacement parse_replacement(const std::string& text);

struct CacheConfig {
  CacheKind kind = CacheKind::galois;
  std::uint32_t num_sets = 4;
  std::uint32_t num_ways = 4;
  // Required for the galois kinds, ignored for conventional.
  std::shared_ptr<const SkewParams> skew;
  Replacement replacement = Replacement::random;
  std::uint64_t seed = 0;
  unsigned line_offset_bits = 6;
  // stacked_galois: 2^stack_bits independent instances.
  unsigned stack_bits = 0;

  // Square GaloisCache over the skew's field.
  static CacheConfig galois(std::shared_ptr<const SkewParams> skew, std::uint64_t seed = 0);
  static CacheConfig stacked(std::shared_ptr<const SkewParams> skew, unsigned stack_bits, std::uint64_t seed = 0);
  static CacheConfig conventional(std::uint32_t sets, std::uint32_t ways, Replacement policy = Replacement::lru,
                                  std::uint64_t seed = 0);

  std::uint32_t instances() const noexcept { return kind == CacheKind::stacked_galois ? 1u << stack_bits : 1u; }

  // Domain ids accepted: p^n for the galois kinds, kConventionalDomains otherwise.
  static constexpr std::uint32_t kConventionalDomains = 1u << 16;
  std::uint32_t max_domains() const noexcept;

  // Throws ConfigError when the geometry and kind disagree.
  void validate() const;
};

struct AddressParts {
  std::uint64_t tag = 0;
  std::uint32_t set_index = 0;
  std::uint32_t instance = 0;

  bool operator==(const AddressParts&) const = default;
};

// Drops the line offset, takes the set index from the next log2(num_sets)
// bits (next num_sets-ary digit for non power-of-two fields), then the stack
// instance bits, and leaves the rest as the tag.
AddressParts decompose_address(const CacheConfig& cfg, Address addr);

// Inverse of decompose_address with a zero line offset.
Address compose_address(const CacheConfig& cfg, const AddressParts& parts);

struct CacheLine {
  bool valid = false;
  DomainId domain = 0;
  std::uint64_t tag = 0;
};

struct EvictedLine {
  DomainId domain = 0;
  std::uint64_t tag = 0;

  bool operator==(const EvictedLine&) const = default;
};

struct AccessOutcome {
  bool hit = false;
  std::uint32_t instance = 0;
  std::uint32_t physical_set = 0;
  std::uint32_t way = 0;
  std::optional<EvictedLine> victim;

  bool operator==(const AccessOutcome&) const = default;
};

struct DomainStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions_caused = 0;
  std::uint64_t self_evictions = 0;

  bool operator==(const DomainStats&) const = default;
};

struct ProbeResult {
  Address addr = 0;
  bool hit = false;

  bool operator==(const ProbeResult&) const = default;
};

// Functional cache simulator. Single owner; copyable for snapshotting.
//
// GaloisCache lookup: the candidate cells for (domain t, set s) are
// {(P(t,s,w), w)} over all ways. A hit needs a valid line carrying the same
// (domain, tag). On a miss the lowest-way invalid candidate is filled; if all
// are valid a candidate is evicted uniformly at random.
class Cache {
 public:
  explicit Cache(CacheConfig cfg);

  const CacheConfig& config() const noexcept { return cfg_; }

  AccessOutcome access(DomainId domain, Address addr);

  // Accesses every address in order and reports only the hit/miss bit.
  std::vector<ProbeResult> observe_probe(DomainId domain, std::span<const Address> addrs);

  // Invalidates all lines. The RNG stream position is kept, so a flushed
  // cache does not replay the draws of a fresh one.
  void flush_all(bool reset_stats = true);

  // Domains that have accessed the cache, in id order.
  std::map<DomainId, DomainStats> stats() const;
  DomainStats stats_for(DomainId domain) const;

  // Simulator-internal inspection, not an adversary view.
  const CacheLine& line(std::uint32_t instance, std::uint32_t physical_set, std::uint32_t way) const;
  std::uint64_t valid_lines() const;
  std::uint64_t valid_lines(DomainId domain) const;

 private:
  std::size_t index(std::uint32_t instance, std::uint32_t set, std::uint32_t way) const noexcept {
    return (static_cast<std::size_t>(instance) * cfg_.num_sets + set) * cfg_.num_ways + way;
  }
  AccessOutcome access_galois(DomainId domain, const AddressParts& parts);
  AccessOutcome access_conventional(DomainId domain, const AddressParts& parts);
  void account(DomainId domain, const AccessOutcome& out);
  std::uint32_t draw_way();

  CacheConfig cfg_;
  std::vector<CacheLine> lines_;
  std::vector<std::uint64_t> last_use_;  // LRU timestamps
  std::uint64_t clock_ = 0;
  std::mt19937_64 rng_;
  std::vector<DomainStats> stats_;  // indexed by domain, grown on demand
  std::vector<std::uint8_t> seen_;
  std::vector<Element> candidates_;
};

}  // namespace galoiscache
