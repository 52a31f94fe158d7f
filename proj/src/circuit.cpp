#include "galoiscache/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "galoiscache/errors.hpp"

namespace galoiscache {

XorNetwork::XorNetwork(unsigned n_inputs, unsigned n_outputs) : n_inputs_(n_inputs), outputs_(n_outputs, kConstZero) {
  if (n_inputs > 64 || n_outputs > 64) throw DomainError("XorNetwork supports at most 64 inputs and outputs");
}

Wire XorNetwork::add_gate(Wire a, Wire b) {
  const Wire next = n_inputs_ + static_cast<Wire>(gates_.size());
  if (a >= next || b >= next) throw DomainError("gate input refers to an undriven wire");
  gates_.push_back({next, a, b});
  return next;
}

void XorNetwork::set_output(unsigned j, Wire w) {
  if (w != kConstZero && w >= n_inputs_ + gates_.size()) throw DomainError("output refers to an undriven wire");
  outputs_.at(j) = w;
}

std::vector<unsigned> XorNetwork::wire_levels() const {
  std::vector<unsigned> level(n_inputs_ + gates_.size(), 0);
  for (const auto& g : gates_) level[g.out] = std::max(level[g.a], level[g.b]) + 1;
  return level;
}

unsigned XorNetwork::output_depth(unsigned j) const {
  const Wire w = outputs_.at(j);
  return w == kConstZero ? 0 : wire_levels()[w];
}

unsigned XorNetwork::depth() const {
  const auto level = wire_levels();
  unsigned d = 0;
  for (Wire w : outputs_)
    if (w != kConstZero) d = std::max(d, level[w]);
  return d;
}

std::uint64_t XorNetwork::evaluate(std::uint64_t input) const {
  std::vector<std::uint8_t> value(n_inputs_ + gates_.size(), 0);
  for (unsigned i = 0; i < n_inputs_; ++i) value[i] = (input >> i) & 1u;
  for (const auto& g : gates_) value[g.out] = value[g.a] ^ value[g.b];
  std::uint64_t out = 0;
  for (unsigned j = 0; j < outputs_.size(); ++j)
    if (outputs_[j] != kConstZero) out |= static_cast<std::uint64_t>(value[outputs_[j]]) << j;
  return out;
}

XorNetwork matrix_to_network(const BinaryMatrix& m, Schedule schedule) {
  XorNetwork net(m.cols(), m.rows());
  for (unsigned i = 0; i < m.rows(); ++i) {
    std::vector<Wire> terms;
    for (unsigned j = 0; j < m.cols(); ++j)
      if (m.get(i, j)) terms.push_back(j);
    if (terms.empty()) continue;
    if (schedule == Schedule::serial) {
      Wire acc = terms[0];
      for (std::size_t k = 1; k < terms.size(); ++k) acc = net.add_gate(acc, terms[k]);
      net.set_output(i, acc);
      continue;
    }
    while (terms.size() > 1) {
      std::vector<Wire> next;
      for (std::size_t k = 0; k + 1 < terms.size(); k += 2) next.push_back(net.add_gate(terms[k], terms[k + 1]));
      if (terms.size() % 2) next.push_back(terms.back());
      terms = std::move(next);
    }
    net.set_output(i, terms[0]);
  }
  return net;
}

CostReport permutation_cost(const SkewParams& sp) {
  const FieldSpec& f = sp.field();
  if (!f.is_binary()) throw UnsupportedField("permutation cost needs a binary field (p = 2)");
  CostReport rep;
  rep.field = f;
  rep.a = sp.a();
  rep.b = sp.b();
  rep.c = sp.c();

  const XorNetwork a_net = matrix_to_network(const_mul_matrix(f, sp.a()));
  rep.a_path_xor_count = a_net.xor_count();
  rep.a_path_depth = a_net.depth();

  unsigned way_depth = 0;
  for (Element w = 0; w < f.order(); ++w) {
    const XorNetwork net = matrix_to_network(const_mul_matrix(f, w));
    rep.ways.push_back({w, net.xor_count(), net.depth()});
    rep.total_xor_count += net.xor_count();
    way_depth = std::max(way_depth, net.depth());
    if (w != 0) rep.adder_xor_count += f.n();
  }
  rep.total_xor_count += rep.a_path_xor_count + rep.adder_xor_count;
  rep.critical_path_depth = std::max(rep.a_path_depth, way_depth) + 1;
  return rep;
}

std::string emit_netlist(const XorNetwork& net, const std::string& name) {
  auto wire_name = [&](Wire w) -> std::string {
    if (w == kConstZero) return "0";
    if (w < net.n_inputs()) return "in" + std::to_string(w);
    return "g" + std::to_string(w - net.n_inputs());
  };
  std::ostringstream os;
  os << "# netlist " << name << '\n'
     << "inputs " << net.n_inputs() << '\n'
     << "outputs " << net.n_outputs() << '\n'
     << "gates " << net.xor_count() << '\n';
  for (const auto& g : net.gates()) os << "XOR " << wire_name(g.out) << ' ' << wire_name(g.a) << ' ' << wire_name(g.b) << '\n';
  for (unsigned j = 0; j < net.n_outputs(); ++j) os << "out" << j << " = " << wire_name(net.output_map()[j]) << '\n';
  return os.str();
}

}  // namespace galoiscache
