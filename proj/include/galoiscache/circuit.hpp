#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "galoiscache/field.hpp"
#include "galoiscache/skew.hpp"

namespace galoiscache {

// Wires 0..n_inputs-1 are the inputs, gate k drives wire n_inputs + k.
using Wire = std::uint32_t;
inline constexpr Wire kConstZero = ~Wire{0};

struct XorGate {
  Wire out = 0;
  Wire a = 0;
  Wire b = 0;

  bool operator==(const XorGate&) const = default;
};

class XorNetwork {
 public:
  XorNetwork() = default;
  XorNetwork(unsigned n_inputs, unsigned n_outputs);

  unsigned n_inputs() const noexcept { return n_inputs_; }
  unsigned n_outputs() const noexcept { return static_cast<unsigned>(outputs_.size()); }
  const std::vector<XorGate>& gates() const noexcept { return gates_; }
  const std::vector<Wire>& output_map() const noexcept { return outputs_; }

  // Appends a gate over two existing wires and returns its output wire.
  Wire add_gate(Wire a, Wire b);
  void set_output(unsigned j, Wire w);

  std::size_t xor_count() const noexcept { return gates_.size(); }
  // Gate levels on the longest input-to-output path.
  unsigned depth() const;
  unsigned output_depth(unsigned j) const;

  // Output bit j of the result is output j of the network.
  std::uint64_t evaluate(std::uint64_t input) const;

  bool operator==(const XorNetwork&) const = default;

 private:
  std::vector<unsigned> wire_levels() const;

  unsigned n_inputs_ = 0;
  std::vector<XorGate> gates_;
  std::vector<Wire> outputs_;
};

enum class Schedule {
  balanced,  // pairwise tree per output: depth ceil(log2 r)
  serial,    // left-to-right chain per output: depth r - 1
};

// One XOR tree per matrix row, r - 1 gates for a row of weight r. No gate is
// shared between outputs, so counts are an upper bound on what an optimizing
// synthesizer would produce.
XorNetwork matrix_to_network(const BinaryMatrix& m, Schedule schedule = Schedule::balanced);

struct WayCost {
  Element w = 0;
  std::size_t xor_count = 0;
  unsigned depth = 0;
};

struct CostReport {
  FieldSpec field = FieldSpec::binary(2);
  Element a = 1, b = 1, c = 0;
  // (b*t)*w for each fixed way constant w; b*t is precomputed per domain.
  std::vector<WayCost> ways;
  std::size_t a_path_xor_count = 0;
  unsigned a_path_depth = 0;
  // n two-input XORs per way w != 0 to add the a*s and (b*t)*w products.
  // Adding the constant c only inverts wires and costs no gate.
  std::size_t adder_xor_count = 0;
  std::size_t total_xor_count = 0;
  // max(a-path depth, max way depth) + 1 for the final addition.
  unsigned critical_path_depth = 0;
};

// Throws UnsupportedField unless the field is binary.
CostReport permutation_cost(const SkewParams& sp);

// Deterministic text form:
//   # netlist <name>
//   inputs <n>
//   outputs <m>
//   gates <k>
//   XOR g<k> <a> <b>      one line per gate
//   out<j> = <wire>       one line per output; constant outputs read "0"
std::string emit_netlist(const XorNetwork& net, const std::string& name);

}  // namespace galoiscache
