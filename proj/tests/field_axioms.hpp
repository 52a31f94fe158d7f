#pragma once

#include <string>
#include <vector>

#include "galoiscache/field.hpp"

// Exhaustive field-axiom check. Returns a description of the first failure,
// or an empty string.
inline std::string check_field_axioms(const galoiscache::FieldSpec& f) {
  using galoiscache::Element;
  const Element q = f.order();
  auto fail = [&](const std::string& what, Element x, Element y, Element z) {
    return f.name() + ": " + what + " fails at (" + std::to_string(x) + "," + std::to_string(y) + "," +
           std::to_string(z) + ")";
  };
  // Tabulate once so the cubic loops stay cheap; each entry still comes from mul/add.
  std::vector<Element> m(static_cast<std::size_t>(q) * q), s(static_cast<std::size_t>(q) * q);
  for (Element x = 0; x < q; ++x)
    for (Element y = 0; y < q; ++y) {
      m[x * q + y] = f.mul(x, y);
      s[x * q + y] = f.add(x, y);
    }
  for (Element x = 0; x < q; ++x) {
    if (s[x * q + 0] != x) return fail("additive identity", x, 0, 0);
    if (m[x * q + 1] != x) return fail("multiplicative identity", x, 1, 0);
    if (m[x * q + 0] != 0) return fail("absorbing zero", x, 0, 0);
    if (f.add(x, f.neg(x)) != 0) return fail("additive inverse", x, 0, 0);
    if (f.sub(x, x) != 0) return fail("subtraction", x, x, 0);
    if (x != 0 && f.mul(x, f.inv(x)) != 1) return fail("multiplicative inverse", x, 0, 0);
    for (Element y = 0; y < q; ++y) {
      if (s[x * q + y] != s[y * q + x]) return fail("additive commutativity", x, y, 0);
      if (m[x * q + y] != m[y * q + x]) return fail("multiplicative commutativity", x, y, 0);
      if (x != 0 && y != 0 && m[x * q + y] == 0) return fail("zero divisor", x, y, 0);
      if (f.add(f.sub(x, y), y) != x) return fail("sub/add", x, y, 0);
      for (Element z = 0; z < q; ++z) {
        if (s[s[x * q + y] * q + z] != s[x * q + s[y * q + z]]) return fail("additive associativity", x, y, z);
        if (m[m[x * q + y] * q + z] != m[x * q + m[y * q + z]]) return fail("multiplicative associativity", x, y, z);
        if (m[x * q + s[y * q + z]] != s[m[x * q + y] * q + m[x * q + z]]) return fail("distributivity", x, y, z);
      }
    }
  }
  return {};
}

// Every supported field of order <= limit: GF(p) for primes and GF(2^n) with
// the default modulus.
inline std::vector<galoiscache::FieldSpec> fields_up_to(std::uint32_t limit) {
  std::vector<galoiscache::FieldSpec> out;
  for (std::uint32_t p = 2; p <= limit; ++p)
    if (galoiscache::is_prime(p)) out.push_back(galoiscache::FieldSpec::prime(p));
  for (unsigned n = 2; (1u << n) <= limit; ++n) out.push_back(galoiscache::FieldSpec::binary(n));
  return out;
}
