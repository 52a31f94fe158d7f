#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "galoiscache/field.hpp"

namespace galoiscache {

// Constants of the skewing function
//
//   P(t, s, w) = a*s + b*t*w + c   (arithmetic in the field)
//
// mapping a (domain t, set s, way w) triple to a physical set index.
// a and b must be non-zero. b*t is precomputed for every domain; for fields
// of order <= kTableLimit the multiplication and inverse tables are built up
// front so lookups on the simulation hot path are table reads.
class SkewParams {
 public:
  static constexpr std::uint32_t kTableLimit = 256;

  explicit SkewParams(FieldSpec field, Element a = 1, Element b = 1, Element c = 0);

  const FieldSpec& field() const noexcept { return field_; }
  Element a() const noexcept { return a_; }
  Element b() const noexcept { return b_; }
  Element c() const noexcept { return c_; }
  std::uint32_t order() const noexcept { return field_.order(); }

  // Precomputed b*t for domain t.
  Element bt(Element t) const;

  Element permute(Element t, Element s, Element w) const;

  // Physical set of every way: out[w] = permute(t, s, w).
  std::vector<Element> permute_all_ways(Element t, Element s) const;
  void permute_all_ways(Element t, Element s, std::span<Element> out) const;

  // The set index s whose way-w candidate sits in physical set `physical`
  // for domain t. Inverse of permute in its s argument.
  Element set_at(Element t, Element physical, Element w) const;

  // See solve_intersection_way().
  Element intersection_way(Element t, Element t2, Element s, Element s2) const;

 private:
  void check(Element v, const char* what) const;
  Element mul(Element x, Element y) const noexcept;
  Element inv(Element x) const;
  Element add(Element x, Element y) const noexcept;
  Element sub(Element x, Element y) const noexcept;

  FieldSpec field_;
  Element a_, b_, c_;
  Element a_inv_;
  std::vector<Element> bt_cache_;
  // Tabulated only for fields of order <= kTableLimit; empty otherwise.
  std::vector<Element> mul_table_;  // [x * order + y]
  std::vector<Element> inv_table_;
};

// Unique way where set s of domain t meets set s2 of domain t2:
//   w = a * (s2 - s) * b^-1 * (t - t2)^-1
// Throws NoUniqueIntersection when t == t2.
Element solve_intersection_way(const SkewParams& sp, Element t, Element t2, Element s, Element s2);

struct DiagonalViolation {
  Element t = 0, t2 = 0, s = 0, s2 = 0;
  std::uint32_t intersections = 0;
  // Set when exactly one way matched but the closed-form solver disagreed.
  std::optional<Element> witness;
  std::optional<Element> solver_way;
};

struct BijectionViolation {
  Element t = 0, w = 0;
  std::uint32_t distinct_images = 0;
};

template <typename Violation>
struct VerificationReport {
  static constexpr std::size_t kMaxRecorded = 256;

  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  // First kMaxRecorded violations in enumeration order.
  std::vector<Violation> violations;

  bool ok() const noexcept { return violation_count == 0; }

  void record(Violation v) {
    ++violation_count;
    if (violations.size() < kMaxRecorded) violations.push_back(std::move(v));
  }
};

using DiagonalReport = VerificationReport<DiagonalViolation>;
using BijectionReport = VerificationReport<BijectionViolation>;

// Any layout function over [0, order)^3, so the verifiers can also be run on
// deliberately broken arithmetic.
using LayoutFn = std::function<std::uint32_t(std::uint32_t t, std::uint32_t s, std::uint32_t w)>;
using SolverFn = std::function<std::uint32_t(std::uint32_t t, std::uint32_t t2, std::uint32_t s, std::uint32_t s2)>;

// Exhaustive check: for every ordered t != t2 and every (s, s2), exactly one
// way w has layout(t,s,w) == layout(t2,s2,w). When a solver is given, the
// single witness must also equal its answer.
DiagonalReport verify_diagonalization(std::uint32_t order, const LayoutFn& layout, const SolverFn& solver = {});
DiagonalReport verify_diagonalization(const SkewParams& sp);

// Exhaustive check: for every (t, w), s -> layout(t,s,w) is a permutation.
BijectionReport verify_way_bijection(std::uint32_t order, const LayoutFn& layout);
BijectionReport verify_way_bijection(const SkewParams& sp);

}  // namespace galoiscache
