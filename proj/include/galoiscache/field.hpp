#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace galoiscache {

// A field element. For GF(2^n) the value is read as a little-endian
// coefficient vector: bit i is the coefficient of x^i, so 42 = 0b101010
// stands for x^5 + x^3 + x.
using Element = std::uint32_t;

// Square (or rectangular) matrix over GF(2), stored one bitmask per row.
// Bit j of row i is the coefficient M[i][j]. At most 32 columns.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(unsigned rows, unsigned cols);

  static BinaryMatrix identity(unsigned n);
  static BinaryMatrix from_columns(unsigned rows, const std::vector<std::uint32_t>& columns);

  unsigned rows() const noexcept { return rows_; }
  unsigned cols() const noexcept { return cols_; }

  bool get(unsigned row, unsigned col) const;
  void set(unsigned row, unsigned col, bool value);

  std::uint32_t row_mask(unsigned row) const { return row_bits_.at(row); }
  std::uint32_t column(unsigned col) const;
  std::vector<std::uint32_t> columns() const;
  unsigned row_weight(unsigned row) const;

  // Matrix-vector product over GF(2); bit i of the result is output row i.
  std::uint64_t apply(std::uint32_t x) const;

  bool is_invertible() const;

  bool operator==(const BinaryMatrix&) const = default;

 private:
  unsigned rows_ = 0;
  unsigned cols_ = 0;
  std::vector<std::uint32_t> row_bits_;
};

// GF(p) for prime p, or GF(2^n) for 2 <= n <= 16 with an irreducible modulus.
//
// All arithmetic is exposed through member functions. Every operand is range
// checked and out-of-range values raise DomainError.
class FieldSpec {
 public:
  static constexpr unsigned kMaxBinaryDegree = 16;

  // GF(p), n = 1. p must be prime and below 2^31.
  static FieldSpec prime(std::uint32_t p);

  // GF(2^n). With no modulus the default table entry for n is used.
  static FieldSpec binary(unsigned n, std::optional<std::uint32_t> modulus = std::nullopt);

  // General entry point: dispatches to prime() / binary(), rejects p>2, n>1.
  static FieldSpec make(std::uint32_t p, unsigned n, std::optional<std::uint32_t> modulus = std::nullopt);

  std::uint32_t p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  // Reducing polynomial as a bit vector. 0 for prime fields.
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t order() const noexcept { return order_; }
  bool is_binary() const noexcept { return p_ == 2; }

  bool contains(Element x) const noexcept { return x < order_; }

  Element add(Element x, Element y) const;
  Element sub(Element x, Element y) const;
  Element neg(Element x) const;
  Element mul(Element x, Element y) const;
  Element inv(Element x) const;
  Element pow(Element x, std::uint64_t e) const;

  // Human readable name, e.g. "GF(2^3)" or "GF(7)".
  std::string name() const;

  bool operator==(const FieldSpec&) const = default;

 private:
  FieldSpec(std::uint32_t p, unsigned n, std::uint32_t modulus, std::uint32_t order)
      : p_(p), n_(n), modulus_(modulus), order_(order) {}

  void check(Element x) const;
  Element mul_unchecked(Element x, Element y) const noexcept;

  std::uint32_t p_ = 2;
  unsigned n_ = 1;
  std::uint32_t modulus_ = 0;
  std::uint32_t order_ = 2;
};

// Irreducible moduli for the binary fields. n = 3..7 are the classic
// low-weight trinomials (x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x+1);
// n = 2 has only one choice, x^2+x+1.
std::uint32_t default_modulus(unsigned n);

// True iff `candidate` (degree exactly n, bit n set) has no factor of degree
// 1..n/2 over GF(2). Plain trial division. Throws DomainError on a degree
// mismatch or n outside 1..62.
bool is_irreducible(unsigned n, std::uint64_t candidate);

bool is_prime(std::uint64_t v);

// Matrix of the GF(2)-linear map x -> k*x. Column j is k * x^j.
// Throws UnsupportedField for p != 2.
BinaryMatrix const_mul_matrix(const FieldSpec& f, Element k);

// Carry-less product of k (constant) and an n-bit input, before reduction.
// A (2n-1) x n matrix; row i collects input bits j with bit (i-j) of k set.
BinaryMatrix unreduced_mul_matrix(unsigned n, std::uint32_t k);

}  // namespace galoiscache
