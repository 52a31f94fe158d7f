#include <gtest/gtest.h>

#include <array>

#include "galoiscache/cache.hpp"
#include "galoiscache/errors.hpp"

namespace galoiscache {
namespace {

std::shared_ptr<const SkewParams> skew(unsigned n, Element a = 1, Element b = 1, Element c = 0) {
  return std::make_shared<const SkewParams>(FieldSpec::binary(n), a, b, c);
}

Address addr_of(const CacheConfig& cfg, std::uint32_t set, std::uint64_t tag, std::uint32_t instance = 0) {
  return compose_address(cfg, {tag, set, instance});
}

TEST(CacheConfig, Validation) {
  EXPECT_NO_THROW(CacheConfig::galois(skew(2)).validate());
  auto bad = CacheConfig::galois(skew(2));
  bad.num_sets = 8;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = CacheConfig::galois(skew(2));
  bad.replacement = Replacement::lru;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(CacheConfig::conventional(6, 4).validate(), ConfigError);
  EXPECT_NO_THROW(CacheConfig::conventional(8, 2).validate());
  EXPECT_THROW(CacheConfig::galois(nullptr), ConfigError);
  EXPECT_EQ(CacheConfig::galois(skew(3)).max_domains(), 8u);
  EXPECT_EQ(CacheConfig::conventional(4, 4).max_domains(), CacheConfig::kConventionalDomains);
}

TEST(CacheKindNames, RoundTrip) {
  for (auto k : {CacheKind::galois, CacheKind::conventional, CacheKind::stacked_galois})
    EXPECT_EQ(parse_cache_kind(to_string(k)), k);
  EXPECT_EQ(parse_replacement("lru"), Replacement::lru);
  EXPECT_THROW(parse_replacement("plru"), ConfigError);
  EXPECT_THROW(parse_cache_kind("direct"), ConfigError);
}

TEST(DecomposeAddress, Examples) {
  const auto cfg = CacheConfig::conventional(4, 4);
  // 0x1040 >> 6 = 0x41: set bits 0b01, tag 0x41 >> 2 = 0x10.
  EXPECT_EQ(decompose_address(cfg, 0x1040), (AddressParts{0x10, 1, 0}));
  EXPECT_EQ(compose_address(cfg, decompose_address(cfg, 0x1040)), 0x1040u);
  EXPECT_EQ(decompose_address(cfg, 0x0), (AddressParts{0, 0, 0}));
  const auto st = CacheConfig::stacked(skew(2), 1);
  EXPECT_EQ(decompose_address(st, 0x1C0), (AddressParts{0, 3, 1}));
}

TEST(DecomposeAddress, RoundTripsWithoutOffset) {
  const auto st = CacheConfig::stacked(skew(3), 2);
  for (Address a = 0; a < (1u << 14); a += 64) EXPECT_EQ(compose_address(st, decompose_address(st, a)), a);
  // Prime field: the set index is the low base-7 digit of the line number.
  const auto p7 = CacheConfig::galois(std::make_shared<const SkewParams>(FieldSpec::prime(7)));
  EXPECT_EQ(decompose_address(p7, 20 << 6), (AddressParts{2, 6, 0}));
  for (Address a = 0; a < (1u << 14); a += 64) EXPECT_EQ(compose_address(p7, decompose_address(p7, a)), a);
}

TEST(Access, FillThenHit) {
  Cache cache(CacheConfig::galois(skew(2)));
  const Address a = addr_of(cache.config(), 1, 0);
  const auto first = cache.access(0, a);
  EXPECT_FALSE(first.hit);
  EXPECT_EQ(first.physical_set, 1u);
  EXPECT_EQ(first.way, 0u);
  EXPECT_FALSE(first.victim.has_value());
  const auto second = cache.access(0, a);
  EXPECT_TRUE(second.hit);
  EXPECT_EQ(second.physical_set, 1u);
  EXPECT_EQ(second.way, 0u);
  EXPECT_EQ(cache.stats_for(0), (DomainStats{1, 1, 0, 0}));
}

TEST(Access, RejectsDomainOutOfRange) {
  Cache cache(CacheConfig::galois(skew(2)));
  EXPECT_THROW(cache.access(4, 0), DomainError);
  EXPECT_NO_THROW(cache.access(3, 0));
}

TEST(Access, LinesAreDomainTagged) {
  Cache cache(CacheConfig::galois(skew(2)));
  const Address a = addr_of(cache.config(), 0, 5);
  cache.access(1, a);
  EXPECT_FALSE(cache.access(2, a).hit);
  EXPECT_TRUE(cache.access(1, a).hit);
  EXPECT_TRUE(cache.access(2, a).hit);
}

TEST(Access, ChecksEveryCandidateBeforeFilling) {
  Cache cache(CacheConfig::galois(skew(2)));
  const auto& cfg = cache.config();
  // Fill way 0 with one line of domain 1 set 0, then a second line lands in way 1.
  cache.access(1, addr_of(cfg, 0, 0));
  const auto b = cache.access(1, addr_of(cfg, 0, 1));
  EXPECT_EQ(b.way, 1u);
  // Re-access of the way-1 line hits rather than filling way 2.
  EXPECT_TRUE(cache.access(1, addr_of(cfg, 0, 1)).hit);
  EXPECT_EQ(cache.valid_lines(), 2u);
}

// Domain 1 primes all 16 cells of GF(4), then domain 2 loads one line of
// set 0. The evicted cell must be uniform over domain 2's four candidates.
TEST(Access, UniformEvictionOverCandidates) {
  const auto sp = skew(2);
  std::array<std::uint64_t, 4> counts{};
  constexpr std::uint64_t kTrials = 100000;
  for (std::uint64_t seed = 0; seed < kTrials; ++seed) {
    Cache cache(CacheConfig::galois(sp, seed));
    for (std::uint32_t s = 0; s < 4; ++s)
      for (std::uint64_t tag = 0; tag < 4; ++tag) cache.access(1, addr_of(cache.config(), s, tag));
    ASSERT_EQ(cache.valid_lines(1), 16u);
    const auto out = cache.access(2, addr_of(cache.config(), 0, 99));
    ASSERT_TRUE(out.victim.has_value());
    ASSERT_EQ(out.victim->domain, 1u);
    ASSERT_EQ(out.physical_set, sp->permute(2, 0, out.way));
    ++counts[out.way];
  }
  for (auto c : counts) EXPECT_NEAR(static_cast<double>(c) / kTrials, 0.25, 0.01);
}

TEST(Access, SingleDomainUsesWholeCache) {
  for (unsigned n = 2; n <= 5; ++n) {
    for (DomainId t : {0u, 1u, 3u}) {
      Cache cache(CacheConfig::galois(skew(n, 3, 1, 1)));
      const std::uint32_t q = cache.config().num_sets;
      for (std::uint64_t tag = 0; tag < q; ++tag)
        for (std::uint32_t s = 0; s < q; ++s) {
          const auto out = cache.access(t, addr_of(cache.config(), s, tag));
          ASSERT_FALSE(out.hit);
          ASSERT_FALSE(out.victim.has_value());
        }
      EXPECT_EQ(cache.valid_lines(), std::uint64_t{q} * q);
      EXPECT_EQ(cache.stats_for(t).self_evictions, 0u);
      // One more line now has to evict one of the domain's own.
      EXPECT_TRUE(cache.access(t, addr_of(cache.config(), 0, q)).victim.has_value());
      EXPECT_EQ(cache.stats_for(t).self_evictions, 1u);
    }
  }
}

std::vector<AccessOutcome> replay(const CacheConfig& cfg, std::uint64_t seed) {
  Cache cache(cfg);
  std::mt19937_64 rng(seed);
  std::vector<AccessOutcome> out;
  for (int i = 0; i < 2000; ++i) {
    const DomainId d = rng() % cfg.max_domains();
    out.push_back(cache.access(d, (rng() % 256) << 6));
  }
  return out;
}

TEST(Cache, DeterministicForSameSeed) {
  const auto cfg = CacheConfig::galois(skew(3), 42);
  EXPECT_EQ(replay(cfg, 1), replay(cfg, 1));
  auto other = cfg;
  other.seed = 43;
  EXPECT_NE(replay(cfg, 1), replay(other, 1));
}

TEST(Cache, DomainZeroMatchesConventionalRandom) {
  for (unsigned n = 2; n <= 4; ++n)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Cache g(CacheConfig::galois(skew(n, 1, 5 % (1u << n), 0), seed));
      Cache c(CacheConfig::conventional(1u << n, 1u << n, Replacement::random, seed));
      std::mt19937_64 rng(seed + 100);
      for (int i = 0; i < 5000; ++i) {
        const Address a = (rng() % (8u << (2 * n))) << 6;
        const auto og = g.access(0, a);
        const auto oc = c.access(0, a);
        ASSERT_EQ(og.hit, oc.hit);
        ASSERT_EQ(og.way, oc.way);
        ASSERT_EQ(og.physical_set, oc.physical_set);
      }
    }
}

TEST(Cache, StackedInstancesDoNotInteract) {
  const auto cfg = CacheConfig::stacked(skew(2), 1, 5);
  Cache cache(cfg);
  // Instance 0 sees heavy traffic from domain 1, instance 1 holds domain 2's lines.
  for (std::uint64_t tag = 0; tag < 4; ++tag) cache.access(2, addr_of(cfg, 0, tag, 1));
  for (int round = 0; round < 50; ++round)
    for (std::uint32_t s = 0; s < 4; ++s)
      for (std::uint64_t tag = 0; tag < 8; ++tag) {
        const auto out = cache.access(1, addr_of(cfg, s, tag, 0));
        ASSERT_EQ(out.instance, 0u);
        if (out.victim) ASSERT_EQ(out.victim->domain, 1u);
      }
  for (std::uint64_t tag = 0; tag < 4; ++tag) EXPECT_TRUE(cache.access(2, addr_of(cfg, 0, tag, 1)).hit);
  EXPECT_EQ(cache.stats_for(1).evictions_caused, 0u);
}

TEST(ObserveProbe, Examples) {
  const auto cfg = CacheConfig::galois(skew(2), 9);
  Cache cache(cfg);
  std::vector<Address> primed;
  for (std::uint64_t tag = 0; tag < 4; ++tag) primed.push_back(addr_of(cfg, 0, tag));
  const auto cold = cache.observe_probe(1, primed);
  for (const auto& r : cold) EXPECT_FALSE(r.hit);
  for (const auto& r : cache.observe_probe(1, primed)) EXPECT_TRUE(r.hit);

  // Fill the rest of the cache with domain 1 so the foreign access must evict.
  for (std::uint32_t s = 1; s < 4; ++s)
    for (std::uint64_t tag = 0; tag < 4; ++tag) cache.access(1, addr_of(cfg, s, tag));
  // Every copy draws the same random way; exactly one victim set meets the
  // primed set in that way.
  const auto sp = skew(2);
  unsigned hits_in_primed = 0;
  for (std::uint32_t s = 0; s < 4; ++s) {
    Cache copy = cache;
    const auto out = copy.access(2, addr_of(cfg, s, 1000));
    ASSERT_TRUE(out.victim.has_value());
    std::uint32_t misses = 0;
    for (const auto& r : copy.observe_probe(1, primed)) misses += !r.hit;
    const bool in_primed = out.physical_set == sp->permute(1, 0, out.way);
    if (in_primed)
      EXPECT_GE(misses, 1u);
    else
      EXPECT_EQ(misses, 0u);
    EXPECT_EQ(in_primed, out.way == solve_intersection_way(*sp, 2, 1, s, 0));
    hits_in_primed += in_primed;
  }
  EXPECT_EQ(hits_in_primed, 1u);

  std::vector<Address> fresh{addr_of(cfg, 2, 500), addr_of(cfg, 3, 501)};
  for (const auto& r : cache.observe_probe(3, fresh)) EXPECT_FALSE(r.hit);
  EXPECT_THROW(cache.observe_probe(1, {}), DomainError);
}

TEST(ObserveProbe, OutputDependsOnlyOnOwnHitsAndMisses) {
  const auto cfg = CacheConfig::galois(skew(2), 3);
  Cache cache(cfg);
  const std::vector<Address> addrs{addr_of(cfg, 1, 0), addr_of(cfg, 1, 0)};
  const auto res = cache.observe_probe(1, addrs);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0], (ProbeResult{addrs[0], false}));
  EXPECT_EQ(res[1], (ProbeResult{addrs[1], true}));
}

TEST(FlushAll, InvalidatesAndKeepsRngPosition) {
  const auto cfg = CacheConfig::galois(skew(2), 11);
  Cache cache(cfg);
  for (std::uint64_t tag = 0; tag < 40; ++tag) cache.access(1, addr_of(cfg, tag % 4, tag));
  cache.flush_all();
  EXPECT_EQ(cache.valid_lines(), 0u);
  EXPECT_TRUE(cache.stats().empty());
  for (std::uint64_t tag = 0; tag < 40; ++tag) EXPECT_FALSE(cache.access(1, addr_of(cfg, tag % 4, tag)).hit);
  cache.flush_all();
  cache.flush_all();
  EXPECT_EQ(cache.valid_lines(), 0u);

  // Same workload on a fresh cache and on a flushed one: the fresh cache
  // starts at the beginning of the stream, the flushed one does not.
  auto workload = [&](Cache& c) {
    std::vector<std::uint32_t> ways;
    for (std::uint64_t tag = 0; tag < 64; ++tag) ways.push_back(c.access(1, addr_of(cfg, 0, tag)).way);
    return ways;
  };
  Cache fresh(cfg);
  Cache reused(cfg);
  workload(reused);
  reused.flush_all();
  Cache fresh_copy(cfg);
  EXPECT_EQ(workload(fresh), workload(fresh_copy));
  EXPECT_NE(workload(fresh), workload(reused));
}

TEST(FlushAll, CanKeepStats) {
  Cache cache(CacheConfig::galois(skew(2)));
  cache.access(1, 0);
  cache.flush_all(false);
  EXPECT_EQ(cache.stats_for(1).misses, 1u);
}

TEST(Conventional, LruEvictsLeastRecentlyUsed) {
  const auto cfg = CacheConfig::conventional(4, 2, Replacement::lru);
  Cache cache(cfg);
  cache.access(0, addr_of(cfg, 1, 0));
  cache.access(0, addr_of(cfg, 1, 1));
  cache.access(0, addr_of(cfg, 1, 0));
  const auto out = cache.access(0, addr_of(cfg, 1, 2));
  ASSERT_TRUE(out.victim.has_value());
  EXPECT_EQ(out.victim->tag, 1u);
  EXPECT_TRUE(cache.access(0, addr_of(cfg, 1, 0)).hit);
}

TEST(Line, BackdoorBounds) {
  Cache cache(CacheConfig::galois(skew(2)));
  EXPECT_THROW(cache.line(0, 4, 0), DomainError);
  EXPECT_THROW(cache.line(1, 0, 0), DomainError);
  EXPECT_FALSE(cache.line(0, 0, 0).valid);
}

}  // namespace
}  // namespace galoiscache
