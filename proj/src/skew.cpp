#include "galoiscache/skew.hpp"

#include <string>

#include "galoiscache/errors.hpp"

namespace galoiscache {

SkewParams::SkewParams(FieldSpec field, Element a, Element b, Element c)
    : field_(std::move(field)), a_(a), b_(b), c_(c) {
  check(a, "a");
  check(b, "b");
  check(c, "c");
  if (a == 0) throw DomainError("skew constant a must be non-zero");
  if (b == 0) throw DomainError("skew constant b must be non-zero");

  const std::uint32_t q = field_.order();
  if (q <= kTableLimit) {
    mul_table_.resize(static_cast<std::size_t>(q) * q);
    for (Element x = 0; x < q; ++x)
      for (Element y = 0; y < q; ++y) mul_table_[x * q + y] = field_.mul(x, y);
    inv_table_.assign(q, 0);
    for (Element x = 1; x < q; ++x) inv_table_[x] = field_.inv(x);
  }
  a_inv_ = inv(a_);
  bt_cache_.resize(q);
  for (Element t = 0; t < q; ++t) bt_cache_[t] = mul(b_, t);
}

void SkewParams::check(Element v, const char* what) const {
  if (!field_.contains(v))
    throw DomainError(std::string(what) + " = " + std::to_string(v) + " out of range for " + field_.name());
}

Element SkewParams::mul(Element x, Element y) const noexcept {
  if (!mul_table_.empty()) return mul_table_[x * field_.order() + y];
  return field_.mul(x, y);
}

Element SkewParams::inv(Element x) const {
  if (x == 0) throw InversionOfZero();
  if (!inv_table_.empty()) return inv_table_[x];
  return field_.inv(x);
}

Element SkewParams::add(Element x, Element y) const noexcept {
  if (field_.is_binary()) return x ^ y;
  return static_cast<Element>((static_cast<std::uint64_t>(x) + y) % field_.p());
}

Element SkewParams::sub(Element x, Element y) const noexcept {
  if (field_.is_binary()) return x ^ y;
  return static_cast<Element>((static_cast<std::uint64_t>(x) + field_.p() - y) % field_.p());
}

Element SkewParams::bt(Element t) const {
  check(t, "domain");
  return bt_cache_[t];
}

Element SkewParams::permute(Element t, Element s, Element w) const {
  check(t, "domain");
  check(s, "set");
  check(w, "way");
  return add(add(mul(a_, s), mul(bt_cache_[t], w)), c_);
}

std::vector<Element> SkewParams::permute_all_ways(Element t, Element s) const {
  std::vector<Element> out(order());
  permute_all_ways(t, s, out);
  return out;
}

void SkewParams::permute_all_ways(Element t, Element s, std::span<Element> out) const {
  check(t, "domain");
  check(s, "set");
  if (out.size() != order()) throw DomainError("output span must hold one entry per way");
  const Element base = add(mul(a_, s), c_);
  const Element k = bt_cache_[t];
  for (Element w = 0; w < order(); ++w) out[w] = add(base, mul(k, w));
}

Element SkewParams::set_at(Element t, Element physical, Element w) const {
  check(t, "domain");
  check(physical, "physical set");
  check(w, "way");
  // a*s = physical - b*t*w - c
  return mul(a_inv_, sub(sub(physical, mul(bt_cache_[t], w)), c_));
}

Element SkewParams::intersection_way(Element t, Element t2, Element s, Element s2) const {
  check(t, "domain");
  check(t2, "domain");
  check(s, "set");
  check(s2, "set");
  if (t == t2) throw NoUniqueIntersection("domains " + std::to_string(t) + " and " + std::to_string(t2) + " are equal");
  // b*(t - t2)*w = a*(s2 - s)
  return mul(mul(a_, sub(s2, s)), inv(mul(b_, sub(t, t2))));
}

Element solve_intersection_way(const SkewParams& sp, Element t, Element t2, Element s, Element s2) {
  return sp.intersection_way(t, t2, s, s2);
}

// ---------------------------------------------------------------------------
// Verifiers

namespace {

// layout[(t * q + s) * q + w]
std::vector<std::uint32_t> tabulate(std::uint32_t q, const LayoutFn& layout) {
  std::vector<std::uint32_t> table(static_cast<std::size_t>(q) * q * q);
  for (std::uint32_t t = 0; t < q; ++t)
    for (std::uint32_t s = 0; s < q; ++s)
      for (std::uint32_t w = 0; w < q; ++w) table[(static_cast<std::size_t>(t) * q + s) * q + w] = layout(t, s, w);
  return table;
}

constexpr std::uint32_t kNone = ~0u;

}  // namespace

DiagonalReport verify_diagonalization(std::uint32_t q, const LayoutFn& layout, const SolverFn& solver) {
  DiagonalReport report;
  if (q == 0) return report;
  const auto table = tabulate(q, layout);
  auto at = [&](std::uint32_t t, std::uint32_t s, std::uint32_t w) {
    return table[(static_cast<std::size_t>(t) * q + s) * q + w];
  };

  const std::size_t q2 = static_cast<std::size_t>(q) * q;
  std::vector<std::uint32_t> counts(q2), witness(q2);
  // Bucket lists of s2 by physical set for one (t2, w); out-of-range images
  // (possible for broken layouts) simply never match.
  std::vector<std::uint32_t> head(q), next(q);

  for (std::uint32_t t = 0; t < q; ++t) {
    for (std::uint32_t t2 = 0; t2 < q; ++t2) {
      if (t == t2) continue;
      std::fill(counts.begin(), counts.end(), 0);
      for (std::uint32_t w = 0; w < q; ++w) {
        std::fill(head.begin(), head.end(), kNone);
        for (std::uint32_t s2 = 0; s2 < q; ++s2) {
          const std::uint32_t phys = at(t2, s2, w);
          if (phys >= q) continue;
          next[s2] = head[phys];
          head[phys] = s2;
        }
        for (std::uint32_t s = 0; s < q; ++s) {
          const std::uint32_t phys = at(t, s, w);
          if (phys >= q) continue;
          for (std::uint32_t s2 = head[phys]; s2 != kNone; s2 = next[s2]) {
            ++counts[s * q + s2];
            witness[s * q + s2] = w;
          }
        }
      }
      for (std::uint32_t s = 0; s < q; ++s) {
        for (std::uint32_t s2 = 0; s2 < q; ++s2) {
          ++report.checked;
          const std::uint32_t n = counts[s * q + s2];
          if (n != 1) {
            report.record({t, t2, s, s2, n, std::nullopt, std::nullopt});
            continue;
          }
          if (solver) {
            const std::uint32_t solved = solver(t, t2, s, s2);
            if (solved != witness[s * q + s2]) report.record({t, t2, s, s2, n, witness[s * q + s2], solved});
          }
        }
      }
    }
  }
  return report;
}

DiagonalReport verify_diagonalization(const SkewParams& sp) {
  return verify_diagonalization(
      sp.order(), [&](std::uint32_t t, std::uint32_t s, std::uint32_t w) { return sp.permute(t, s, w); },
      [&](std::uint32_t t, std::uint32_t t2, std::uint32_t s, std::uint32_t s2) {
        return solve_intersection_way(sp, t, t2, s, s2);
      });
}

BijectionReport verify_way_bijection(std::uint32_t q, const LayoutFn& layout) {
  BijectionReport report;
  std::vector<std::uint8_t> seen(q);
  for (std::uint32_t t = 0; t < q; ++t) {
    for (std::uint32_t w = 0; w < q; ++w) {
      std::fill(seen.begin(), seen.end(), 0);
      std::uint32_t distinct = 0;
      for (std::uint32_t s = 0; s < q; ++s) {
        const std::uint32_t phys = layout(t, s, w);
        if (phys < q && !seen[phys]) {
          seen[phys] = 1;
          ++distinct;
        }
      }
      ++report.checked;
      if (distinct != q) report.record({t, w, distinct});
    }
  }
  return report;
}

BijectionReport verify_way_bijection(const SkewParams& sp) {
  return verify_way_bijection(sp.order(),
                              [&](std::uint32_t t, std::uint32_t s, std::uint32_t w) { return sp.permute(t, s, w); });
}

}  // namespace galoiscache
