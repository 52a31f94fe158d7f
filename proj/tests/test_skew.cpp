#include <gtest/gtest.h>

#include <random>

#include "galoiscache/errors.hpp"
#include "galoiscache/skew.hpp"
#include "oracles.hpp"

namespace galoiscache {
namespace {

SkewParams gf4(Element a = 1, Element b = 1, Element c = 0) { return SkewParams(FieldSpec::binary(2), a, b, c); }

oracle::Field as_oracle(const FieldSpec& f) { return {f.p(), f.n(), f.modulus()}; }

TEST(SkewParams, RejectsZeroConstants) {
  EXPECT_THROW(gf4(0, 1, 0), DomainError);
  EXPECT_THROW(gf4(1, 0, 0), DomainError);
  EXPECT_THROW(gf4(4, 1, 0), DomainError);
  EXPECT_THROW(gf4(1, 1, 4), DomainError);
  EXPECT_NO_THROW(gf4(3, 2, 3));
}

TEST(SkewParams, PrecomputesBTimesT) {
  const SkewParams sp(FieldSpec::binary(3), 5, 6, 1);
  for (Element t = 0; t < 8; ++t) EXPECT_EQ(sp.bt(t), sp.field().mul(6, t));
}

TEST(Permute, Examples) {
  const auto sp = gf4();
  for (Element s = 0; s < 4; ++s)
    for (Element w = 0; w < 4; ++w) EXPECT_EQ(sp.permute(0, s, w), s);
  for (Element w = 0; w < 4; ++w) EXPECT_EQ(sp.permute(1, 0, w), w);
  EXPECT_EQ(sp.permute(2, 1, 3), 0u);
  EXPECT_THROW(sp.permute(4, 0, 0), DomainError);
  EXPECT_THROW(sp.permute(0, 0, 4), DomainError);
}

TEST(Permute, MatchesOracleLayout) {
  for (unsigned n = 2; n <= 5; ++n) {
    const FieldSpec f = FieldSpec::binary(n);
    const auto o = as_oracle(f);
    const SkewParams sp(f, 3, 5 % f.order() ? 5 % f.order() : 1, 2);
    for (Element t = 0; t < f.order(); ++t)
      for (Element s = 0; s < f.order(); ++s)
        for (Element w = 0; w < f.order(); ++w)
          ASSERT_EQ(sp.permute(t, s, w), oracle::layout(o, sp.a(), sp.b(), sp.c(), t, s, w));
  }
  const SkewParams p7(FieldSpec::prime(7), 2, 3, 1);
  const oracle::Field o7{7, 1, 0};
  for (Element t = 0; t < 7; ++t)
    for (Element s = 0; s < 7; ++s)
      for (Element w = 0; w < 7; ++w) ASSERT_EQ(p7.permute(t, s, w), oracle::layout(o7, 2, 3, 1, t, s, w));
}

TEST(Permute, LargeFieldWithoutTables) {
  // Order above the table limit exercises the direct arithmetic path.
  const FieldSpec f = FieldSpec::binary(10);
  const SkewParams sp(f, 7, 9, 11);
  const auto o = as_oracle(f);
  for (Element t = 0; t < f.order(); t += 37)
    for (Element s = 0; s < f.order(); s += 53)
      for (Element w = 0; w < f.order(); w += 41) ASSERT_EQ(sp.permute(t, s, w), oracle::layout(o, 7, 9, 11, t, s, w));
}

TEST(PermuteAllWays, Examples) {
  const auto sp = gf4();
  EXPECT_EQ(sp.permute_all_ways(0, 2), (std::vector<Element>{2, 2, 2, 2}));
  EXPECT_EQ(sp.permute_all_ways(1, 0), (std::vector<Element>{0, 1, 2, 3}));
  EXPECT_EQ(sp.permute_all_ways(3, 0), (std::vector<Element>{0, 3, 1, 2}));
  std::vector<Element> small(3);
  EXPECT_THROW(sp.permute_all_ways(0, 0, small), DomainError);
}

TEST(PermuteAllWays, AgreesWithPermute) {
  const SkewParams sp(FieldSpec::prime(11), 4, 7, 3);
  for (Element t = 0; t < 11; ++t)
    for (Element s = 0; s < 11; ++s) {
      const auto row = sp.permute_all_ways(t, s);
      for (Element w = 0; w < 11; ++w) ASSERT_EQ(row[w], sp.permute(t, s, w));
    }
}

TEST(SetAt, InvertsPermute) {
  const SkewParams sp(FieldSpec::binary(4), 7, 5, 9);
  for (Element t = 0; t < 16; ++t)
    for (Element s = 0; s < 16; ++s)
      for (Element w = 0; w < 16; ++w) ASSERT_EQ(sp.set_at(t, sp.permute(t, s, w), w), s);
}

TEST(SolveIntersectionWay, Examples) {
  const auto sp = gf4();
  for (Element s = 0; s < 4; ++s)
    for (Element t = 0; t < 4; ++t)
      for (Element t2 = 0; t2 < 4; ++t2)
        if (t != t2) EXPECT_EQ(solve_intersection_way(sp, t, t2, s, s), 0u);
  EXPECT_EQ(solve_intersection_way(sp, 1, 3, 2, 1), 2u);
  // GF(7), a=2, b=3, c=1: w = 2*5*inv(3)*inv(4) = 100 mod 7 = 2; the
  // enumeration oracle finds the same single way.
  const SkewParams p7(FieldSpec::prime(7), 2, 3, 1);
  EXPECT_EQ(solve_intersection_way(p7, 1, 4, 0, 5), 2u);
  EXPECT_EQ(oracle::intersections({7, 1, 0}, 2, 3, 1, 1, 4, 0, 5), (std::vector<std::uint32_t>{2}));
  EXPECT_THROW(solve_intersection_way(sp, 2, 2, 0, 1), NoUniqueIntersection);
}

TEST(SolveIntersectionWay, MatchesBruteForceOnSmallFields) {
  std::vector<FieldSpec> fields{FieldSpec::prime(2),  FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::prime(7),
                                FieldSpec::prime(11), FieldSpec::prime(13), FieldSpec::binary(2), FieldSpec::binary(3),
                                FieldSpec::binary(4)};
  for (const auto& f : fields) {
    const auto o = as_oracle(f);
    const Element q = f.order();
    const SkewParams sp(f, q > 2 ? 2 : 1, 1, q > 3 ? 3 : 0);
    for (Element t = 0; t < q; ++t)
      for (Element t2 = 0; t2 < q; ++t2) {
        if (t == t2) continue;
        for (Element s = 0; s < q; ++s)
          for (Element s2 = 0; s2 < q; ++s2) {
            const auto ways = oracle::intersections(o, sp.a(), sp.b(), sp.c(), t, t2, s, s2);
            ASSERT_EQ(ways.size(), 1u);
            ASSERT_EQ(solve_intersection_way(sp, t, t2, s, s2), ways[0]) << f.name();
          }
      }
  }
}

TEST(VerifyDiagonalization, Examples) {
  const auto r4 = verify_diagonalization(gf4());
  EXPECT_EQ(r4.checked, 192u);
  EXPECT_TRUE(r4.ok());
  const auto r8 = verify_diagonalization(SkewParams(FieldSpec::binary(3, 0b1011)));
  EXPECT_EQ(r8.checked, 3584u);
  EXPECT_TRUE(r8.ok());
  const auto r7 = verify_diagonalization(SkewParams(FieldSpec::prime(7), 3, 5, 2));
  EXPECT_EQ(r7.checked, 7u * 6 * 7 * 7);
  EXPECT_TRUE(r7.ok());
}

TEST(VerifyDiagonalization, RandomConstantsUpToOrder64) {
  std::mt19937_64 rng(1234);
  std::vector<FieldSpec> fields{FieldSpec::prime(5), FieldSpec::prime(13), FieldSpec::prime(31)};
  for (unsigned n = 2; n <= 6; ++n) fields.push_back(FieldSpec::binary(n));
  for (const auto& f : fields) {
    const Element q = f.order();
    for (int i = 0; i < 10; ++i) {
      const SkewParams sp(f, 1 + rng() % (q - 1), 1 + rng() % (q - 1), rng() % q);
      const auto rep = verify_diagonalization(sp);
      ASSERT_TRUE(rep.ok()) << f.name() << " a=" << sp.a() << " b=" << sp.b() << " c=" << sp.c();
      ASSERT_EQ(rep.checked, std::uint64_t{q} * (q - 1) * q * q);
    }
  }
}

TEST(VerifyDiagonalization, NegativeControlRingArithmetic) {
  // Z/4 instead of GF(4): 2*2 = 0, so the layout has zero divisors.
  const auto rep = verify_diagonalization(4, [](std::uint32_t t, std::uint32_t s, std::uint32_t w) {
    return oracle::ring_layout(2, 1, 1, 0, t, s, w);
  });
  EXPECT_FALSE(rep.ok());
  EXPECT_GT(rep.violation_count, 0u);
  EXPECT_EQ(rep.checked, 192u);
  // Domains 0 and 2 meet s = s' = 0 at both w = 0 and w = 2.
  bool found = false;
  for (const auto& v : rep.violations) found |= v.t == 0 && v.t2 == 2 && v.s == 0 && v.s2 == 0 && v.intersections == 2;
  EXPECT_TRUE(found);
}

TEST(VerifyDiagonalization, DetectsWrongSolver) {
  const auto sp = gf4();
  const auto rep = verify_diagonalization(
      4, [&](std::uint32_t t, std::uint32_t s, std::uint32_t w) { return sp.permute(t, s, w); },
      [](std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t) { return 0u; });
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_TRUE(rep.violations.front().solver_way.has_value());
}

TEST(VerifyWayBijection, Examples) {
  const auto r4 = verify_way_bijection(gf4());
  EXPECT_EQ(r4.checked, 16u);
  EXPECT_TRUE(r4.ok());
  const auto r16 = verify_way_bijection(SkewParams(FieldSpec::binary(4), 7, 5, 9));
  EXPECT_EQ(r16.checked, 256u);
  EXPECT_TRUE(r16.ok());
}

TEST(VerifyWayBijection, NegativeControl) {
  // a = 2 in Z/4 maps s and s+2 to the same set.
  const auto rep = verify_way_bijection(4, [](std::uint32_t t, std::uint32_t s, std::uint32_t w) {
    return oracle::ring_layout(2, 2, 1, 0, t, s, w);
  });
  EXPECT_EQ(rep.violation_count, 16u);
  EXPECT_EQ(rep.violations.front().distinct_images, 2u);
}

TEST(Layout, DomainZeroIsUnskewed) {
  for (unsigned n = 2; n <= 5; ++n) {
    const FieldSpec f = FieldSpec::binary(n);
    for (Element a = 1; a < f.order(); a += 3) {
      const SkewParams sp(f, a, 1, 0);
      for (Element s = 0; s < f.order(); ++s)
        for (Element w = 0; w < f.order(); ++w) ASSERT_EQ(sp.permute(0, s, w), f.mul(a, s));
    }
  }
}

TEST(VerificationReport, CapsRecordedViolations) {
  // Constant layout: every pair meets in every way.
  const auto rep = verify_diagonalization(8, [](std::uint32_t, std::uint32_t, std::uint32_t) { return 0u; });
  EXPECT_EQ(rep.violation_count, rep.checked);
  EXPECT_EQ(rep.violations.size(), DiagonalReport::kMaxRecorded);
}

}  // namespace
}  // namespace galoiscache
