#include "galoiscache/field.hpp"

#include <bit>
#include <sstream>

#include "galoiscache/errors.hpp"

namespace galoiscache {

namespace {

unsigned degree_of(std::uint64_t poly) { return poly == 0 ? 0 : 63u - std::countl_zero(poly); }

// Remainder of a modulo b over GF(2)[x]; b != 0.
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned db = degree_of(b);
  while (a != 0 && degree_of(a) >= db) a ^= b << (degree_of(a) - db);
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// BinaryMatrix

BinaryMatrix::BinaryMatrix(unsigned rows, unsigned cols) : rows_(rows), cols_(cols), row_bits_(rows, 0) {
  if (cols > 32) throw DomainError("BinaryMatrix supports at most 32 columns");
}

BinaryMatrix BinaryMatrix::identity(unsigned n) {
  BinaryMatrix m(n, n);
  for (unsigned i = 0; i < n; ++i) m.row_bits_[i] = 1u << i;
  return m;
}

BinaryMatrix BinaryMatrix::from_columns(unsigned rows, const std::vector<std::uint32_t>& columns) {
  BinaryMatrix m(rows, static_cast<unsigned>(columns.size()));
  for (unsigned j = 0; j < columns.size(); ++j)
    for (unsigned i = 0; i < rows; ++i)
      if ((columns[j] >> i) & 1u) m.row_bits_[i] |= 1u << j;
  return m;
}

bool BinaryMatrix::get(unsigned row, unsigned col) const {
  if (col >= cols_) throw DomainError("column out of range");
  return (row_bits_.at(row) >> col) & 1u;
}

void BinaryMatrix::set(unsigned row, unsigned col, bool value) {
  if (col >= cols_) throw DomainError("column out of range");
  if (value)
    row_bits_.at(row) |= 1u << col;
  else
    row_bits_.at(row) &= ~(1u << col);
}

std::uint32_t BinaryMatrix::column(unsigned col) const {
  if (col >= cols_) throw DomainError("column out of range");
  std::uint32_t out = 0;
  for (unsigned i = 0; i < rows_ && i < 32; ++i) out |= ((row_bits_[i] >> col) & 1u) << i;
  return out;
}

std::vector<std::uint32_t> BinaryMatrix::columns() const {
  std::vector<std::uint32_t> out(cols_);
  for (unsigned j = 0; j < cols_; ++j) out[j] = column(j);
  return out;
}

unsigned BinaryMatrix::row_weight(unsigned row) const {
  return static_cast<unsigned>(std::popcount(row_bits_.at(row)));
}

std::uint64_t BinaryMatrix::apply(std::uint32_t x) const {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < rows_; ++i)
    out |= static_cast<std::uint64_t>(std::popcount(row_bits_[i] & x) & 1) << i;
  return out;
}

bool BinaryMatrix::is_invertible() const {
  if (rows_ != cols_) return false;
  std::vector<std::uint32_t> m = row_bits_;
  for (unsigned col = 0; col < cols_; ++col) {
    unsigned pivot = col;
    while (pivot < rows_ && !((m[pivot] >> col) & 1u)) ++pivot;
    if (pivot == rows_) return false;
    std::swap(m[pivot], m[col]);
    for (unsigned r = 0; r < rows_; ++r)
      if (r != col && ((m[r] >> col) & 1u)) m[r] ^= m[col];
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldSpec

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::uint64_t d = 3; d * d <= v; d += 2)
    if (v % d == 0) return false;
  return true;
}

std::uint32_t default_modulus(unsigned n) {
  switch (n) {
    case 2: return 0b111;
    case 3: return 0b1011;
    case 4: return 0b10011;
    case 5: return 0b100101;
    case 6: return 0b1000011;
    case 7: return 0b10000011;
    default: break;
  }
  if (n < 2 || n > FieldSpec::kMaxBinaryDegree)
    throw DomainError("no default modulus for GF(2^" + std::to_string(n) + ")");
  // Outside the table: lowest-valued irreducible polynomial of degree n.
  for (std::uint32_t low = 1; low < (1u << n); low += 2) {
    const std::uint32_t cand = (1u << n) | low;
    if (is_irreducible(n, cand)) return cand;
  }
  throw DomainError("no irreducible polynomial found");  // unreachable
}

bool is_irreducible(unsigned n, std::uint64_t candidate) {
  if (n < 1 || n > 62) throw DomainError("degree must be in 1..62");
  if (degree_of(candidate) != n || candidate == 0)
    throw DomainError("candidate polynomial does not have degree " + std::to_string(n));
  for (unsigned d = 1; d <= n / 2; ++d)
    for (std::uint64_t divisor = 1ull << d; divisor < (2ull << d); ++divisor)
      if (poly_mod(candidate, divisor) == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (p >= (1u << 31) || !is_prime(p)) throw DomainError(std::to_string(p) + " is not a supported prime");
  return FieldSpec(p, 1, 0, p);
}

FieldSpec FieldSpec::binary(unsigned n, std::optional<std::uint32_t> modulus) {
  if (n == 1) {
    if (modulus && *modulus != 0b11) throw DomainError("GF(2) takes no modulus other than x+1");
    return prime(2);
  }
  if (n < 1 || n > kMaxBinaryDegree)
    throw DomainError("GF(2^n) supported for 1 <= n <= " + std::to_string(kMaxBinaryDegree));
  const std::uint32_t r = modulus.value_or(default_modulus(n));
  if (!is_irreducible(n, r)) {
    std::ostringstream os;
    os << "modulus 0x" << std::hex << r << " is reducible over GF(2)";
    throw DomainError(os.str());
  }
  return FieldSpec(2, n, r, 1u << n);
}

FieldSpec FieldSpec::make(std::uint32_t p, unsigned n, std::optional<std::uint32_t> modulus) {
  if (n < 1) throw DomainError("extension degree must be >= 1");
  if (p == 2) return binary(n, modulus);
  if (n != 1) throw UnsupportedField("GF(p^n) with p > 2 and n > 1 is not supported");
  if (modulus) throw DomainError("prime fields take no modulus");
  return prime(p);
}

std::string FieldSpec::name() const {
  if (n_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(" + std::to_string(p_) + "^" + std::to_string(n_) + ")";
}

void FieldSpec::check(Element x) const {
  if (x >= order_)
    throw DomainError("element " + std::to_string(x) + " out of range for " + name());
}

Element FieldSpec::add(Element x, Element y) const {
  check(x);
  check(y);
  if (p_ == 2) return x ^ y;
  return static_cast<Element>((static_cast<std::uint64_t>(x) + y) % p_);
}

Element FieldSpec::neg(Element x) const {
  check(x);
  if (p_ == 2 || x == 0) return x;
  return p_ - x;
}

Element FieldSpec::sub(Element x, Element y) const { return add(x, neg(y)); }

Element FieldSpec::mul_unchecked(Element x, Element y) const noexcept {
  if (n_ == 1) return static_cast<Element>(static_cast<std::uint64_t>(x) * y % p_);
  // Shift-and-add with the reduction interleaved: x is multiplied by the
  // polynomial variable once per step and folded back below degree n.
  const std::uint32_t top = 1u << n_;
  Element acc = 0;
  while (y != 0) {
    if (y & 1u) acc ^= x;
    y >>= 1;
    x <<= 1;
    if (x & top) x ^= modulus_;
  }
  return acc;
}

Element FieldSpec::mul(Element x, Element y) const {
  check(x);
  check(y);
  return mul_unchecked(x, y);
}

Element FieldSpec::pow(Element x, std::uint64_t e) const {
  check(x);
  Element result = 1 % order_;
  while (e != 0) {
    if (e & 1u) result = mul_unchecked(result, x);
    x = mul_unchecked(x, x);
    e >>= 1;
  }
  return result;
}

Element FieldSpec::inv(Element x) const {
  check(x);
  if (x == 0) throw InversionOfZero();
  // x^(q-2) = x^-1 in a field of order q.
  return pow(x, static_cast<std::uint64_t>(order_) - 2);
}

BinaryMatrix const_mul_matrix(const FieldSpec& f, Element k) {
  if (!f.is_binary()) throw UnsupportedField("constant-multiplication matrices need p = 2");
  std::vector<std::uint32_t> cols(f.n());
  for (unsigned j = 0; j < f.n(); ++j) cols[j] = f.mul(k, 1u << j);
  return BinaryMatrix::from_columns(f.n(), cols);
}

BinaryMatrix unreduced_mul_matrix(unsigned n, std::uint32_t k) {
  if (n < 1 || n > 16) throw DomainError("unreduced multiplication supported for 1 <= n <= 16");
  if (k >> n) throw DomainError("constant wider than n bits");
  BinaryMatrix m(2 * n - 1, n);
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i)
      if ((k >> i) & 1u) m.set(i + j, j, true);
  return m;
}

}  // namespace galoiscache
