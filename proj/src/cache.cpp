#include "galoiscache/cache.hpp"

#include <bit>

#include "galoiscache/errors.hpp"

namespace galoiscache {

std::string to_string(CacheKind kind) {
  switch (kind) {
    case CacheKind::galois: return "galois";
    case CacheKind::conventional: return "conventional";
    case CacheKind::stacked_galois: return "stacked-galois";
  }
  return "?";
}

std::string to_string(Replacement policy) { return policy == Replacement::lru ? "lru" : "random"; }

CacheKind parse_cache_kind(const std::string& text) {
  if (text == "galois") return CacheKind::galois;
  if (text == "conventional") return CacheKind::conventional;
  if (text == "stacked-galois" || text == "stacked") return CacheKind::stacked_galois;
  throw ConfigError("unknown cache kind '" + text + "'");
}

Replacement parse_replacement(const std::string& text) {
  if (text == "lru") return Replacement::lru;
  if (text == "random") return Replacement::random;
  throw ConfigError("unknown replacement policy '" + text + "'");
}

// ---------------------------------------------------------------------------
// CacheConfig

CacheConfig CacheConfig::galois(std::shared_ptr<const SkewParams> skew, std::uint64_t seed) {
  if (!skew) throw ConfigError("galois cache needs skew parameters");
  CacheConfig cfg;
  cfg.kind = CacheKind::galois;
  cfg.num_sets = cfg.num_ways = skew->order();
  cfg.skew = std::move(skew);
  cfg.replacement = Replacement::random;
  cfg.seed = seed;
  return cfg;
}

CacheConfig CacheConfig::stacked(std::shared_ptr<const SkewParams> skew, unsigned stack_bits, std::uint64_t seed) {
  CacheConfig cfg = galois(std::move(skew), seed);
  cfg.kind = CacheKind::stacked_galois;
  cfg.stack_bits = stack_bits;
  return cfg;
}

CacheConfig CacheConfig::conventional(std::uint32_t sets, std::uint32_t ways, Replacement policy, std::uint64_t seed) {
  CacheConfig cfg;
  cfg.kind = CacheKind::conventional;
  cfg.num_sets = sets;
  cfg.num_ways = ways;
  cfg.replacement = policy;
  cfg.seed = seed;
  return cfg;
}

std::uint32_t CacheConfig::max_domains() const noexcept {
  if (kind == CacheKind::conventional || !skew) return kConventionalDomains;
  return skew->order();
}

void CacheConfig::validate() const {
  if (line_offset_bits > 32) throw ConfigError("line offset must be at most 32 bits");
  if (num_sets == 0 || num_ways == 0) throw ConfigError("cache needs at least one set and one way");
  if (kind == CacheKind::conventional) {
    if (!std::has_single_bit(num_sets)) throw ConfigError("conventional cache needs a power-of-two set count");
    if (stack_bits != 0) throw ConfigError("stack bits only apply to stacked-galois caches");
    return;
  }
  if (!skew) throw ConfigError(to_string(kind) + " cache needs skew parameters");
  if (num_sets != skew->order() || num_ways != skew->order())
    throw ConfigError("galois cache must have p^n sets and p^n ways (p^n = " + std::to_string(skew->order()) + ")");
  if (replacement != Replacement::random) throw ConfigError("galois caches use random replacement");
  if (kind == CacheKind::galois && stack_bits != 0) throw ConfigError("stack bits only apply to stacked-galois caches");
  if (stack_bits > 16) throw ConfigError("at most 2^16 stacked instances");
}

// ---------------------------------------------------------------------------
// Address slicing

AddressParts decompose_address(const CacheConfig& cfg, Address addr) {
  const std::uint64_t line = cfg.line_offset_bits >= 64 ? 0 : addr >> cfg.line_offset_bits;
  AddressParts parts;
  parts.set_index = static_cast<std::uint32_t>(line % cfg.num_sets);
  std::uint64_t rest = line / cfg.num_sets;
  if (cfg.kind == CacheKind::stacked_galois) {
    parts.instance = static_cast<std::uint32_t>(rest & ((1ull << cfg.stack_bits) - 1));
    rest >>= cfg.stack_bits;
  }
  parts.tag = rest;
  return parts;
}

Address compose_address(const CacheConfig& cfg, const AddressParts& parts) {
  std::uint64_t line = parts.tag;
  if (cfg.kind == CacheKind::stacked_galois) line = (line << cfg.stack_bits) | parts.instance;
  line = line * cfg.num_sets + parts.set_index;
  return line << cfg.line_offset_bits;
}

// ---------------------------------------------------------------------------
// Cache

Cache::Cache(CacheConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate();
  lines_.assign(static_cast<std::size_t>(cfg_.instances()) * cfg_.num_sets * cfg_.num_ways, CacheLine{});
  if (cfg_.kind == CacheKind::conventional && cfg_.replacement == Replacement::lru) last_use_.assign(lines_.size(), 0);
  if (cfg_.kind != CacheKind::conventional) candidates_.resize(cfg_.num_ways);
}

std::uint32_t Cache::draw_way() { return static_cast<std::uint32_t>(rng_() % cfg_.num_ways); }

AccessOutcome Cache::access(DomainId domain, Address addr) {
  if (domain >= cfg_.max_domains())
    throw DomainError("domain " + std::to_string(domain) + " out of range (cache admits " +
                      std::to_string(cfg_.max_domains()) + " domains)");
  const AddressParts parts = decompose_address(cfg_, addr);
  AccessOutcome out = cfg_.kind == CacheKind::conventional ? access_conventional(domain, parts)
                                                            : access_galois(domain, parts);
  account(domain, out);
  return out;
}

AccessOutcome Cache::access_galois(DomainId domain, const AddressParts& parts) {
  AccessOutcome out;
  out.instance = parts.instance;
  cfg_.skew->permute_all_ways(domain, parts.set_index, candidates_);

  std::optional<std::uint32_t> free_way;
  for (std::uint32_t w = 0; w < cfg_.num_ways; ++w) {
    const CacheLine& l = lines_[index(parts.instance, candidates_[w], w)];
    if (!l.valid) {
      if (!free_way) free_way = w;
      continue;
    }
    if (l.domain == domain && l.tag == parts.tag) {
      out.hit = true;
      out.physical_set = candidates_[w];
      out.way = w;
      return out;
    }
  }

  const std::uint32_t w = free_way ? *free_way : draw_way();
  CacheLine& slot = lines_[index(parts.instance, candidates_[w], w)];
  if (slot.valid) out.victim = EvictedLine{slot.domain, slot.tag};
  slot = CacheLine{true, domain, parts.tag};
  out.physical_set = candidates_[w];
  out.way = w;
  return out;
}

AccessOutcome Cache::access_conventional(DomainId domain, const AddressParts& parts) {
  AccessOutcome out;
  out.physical_set = parts.set_index;
  const bool lru = cfg_.replacement == Replacement::lru;
  ++clock_;

  std::optional<std::uint32_t> free_way;
  for (std::uint32_t w = 0; w < cfg_.num_ways; ++w) {
    const std::size_t i = index(0, parts.set_index, w);
    const CacheLine& l = lines_[i];
    if (!l.valid) {
      if (!free_way) free_way = w;
      continue;
    }
    if (l.domain == domain && l.tag == parts.tag) {
      out.hit = true;
      out.way = w;
      if (lru) last_use_[i] = clock_;
      return out;
    }
  }

  std::uint32_t w = 0;
  if (free_way) {
    w = *free_way;
  } else if (lru) {
    for (std::uint32_t k = 1; k < cfg_.num_ways; ++k)
      if (last_use_[index(0, parts.set_index, k)] < last_use_[index(0, parts.set_index, w)]) w = k;
  } else {
    w = draw_way();
  }
  const std::size_t i = index(0, parts.set_index, w);
  if (lines_[i].valid) out.victim = EvictedLine{lines_[i].domain, lines_[i].tag};
  lines_[i] = CacheLine{true, domain, parts.tag};
  if (lru) last_use_[i] = clock_;
  out.way = w;
  return out;
}

void Cache::account(DomainId domain, const AccessOutcome& out) {
  if (domain >= stats_.size()) {
    stats_.resize(domain + 1);
    seen_.resize(domain + 1, 0);
  }
  seen_[domain] = 1;
  DomainStats& st = stats_[domain];
  if (out.hit) {
    ++st.hits;
    return;
  }
  ++st.misses;
  if (out.victim) {
    if (out.victim->domain == domain)
      ++st.self_evictions;
    else
      ++st.evictions_caused;
  }
}

std::vector<ProbeResult> Cache::observe_probe(DomainId domain, std::span<const Address> addrs) {
  if (addrs.empty()) throw DomainError("probe needs at least one address");
  std::vector<ProbeResult> out;
  out.reserve(addrs.size());
  for (Address a : addrs) out.push_back({a, access(domain, a).hit});
  return out;
}

void Cache::flush_all(bool reset_stats) {
  std::fill(lines_.begin(), lines_.end(), CacheLine{});
  std::fill(last_use_.begin(), last_use_.end(), 0);
  clock_ = 0;
  if (reset_stats) {
    stats_.clear();
    seen_.clear();
  }
}

std::map<DomainId, DomainStats> Cache::stats() const {
  std::map<DomainId, DomainStats> out;
  for (DomainId d = 0; d < stats_.size(); ++d)
    if (seen_[d]) out.emplace(d, stats_[d]);
  return out;
}

DomainStats Cache::stats_for(DomainId domain) const { return domain < stats_.size() ? stats_[domain] : DomainStats{}; }

const CacheLine& Cache::line(std::uint32_t instance, std::uint32_t physical_set, std::uint32_t way) const {
  if (instance >= cfg_.instances() || physical_set >= cfg_.num_sets || way >= cfg_.num_ways)
    throw DomainError("line coordinates out of range");
  return lines_[index(instance, physical_set, way)];
}

std::uint64_t Cache::valid_lines() const {
  std::uint64_t n = 0;
  for (const auto& l : lines_) n += l.valid;
  return n;
}

std::uint64_t Cache::valid_lines(DomainId domain) const {
  std::uint64_t n = 0;
  for (const auto& l : lines_) n += l.valid && l.domain == domain;
  return n;
}

}  // namespace galoiscache
