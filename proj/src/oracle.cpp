#include "csat/oracle.hpp"

#include <algorithm>

namespace csat {

namespace {

OracleVerdict::Class classify(uint64_t sat, uint32_t bits) {
  if (sat == 0) return OracleVerdict::Class::Contradiction;
  if (sat == (1ull << bits)) return OracleVerdict::Class::Tautology;
  return OracleVerdict::Class::Mixed;
}

}  // namespace

OracleVerdict brute_force(const Circuit& c) {
  uint32_t n = c.input_count();
  if (n > 24) throw OracleLimit(n);

  OracleVerdict v;
  v.enumerated_inputs = n;
  std::vector<uint8_t> bits(n, 0);
  std::vector<uint8_t> wires;
  for (uint64_t pattern = 0; pattern < (1ull << n); ++pattern) {
    for (uint32_t i = 0; i < n; ++i) bits[i] = uint8_t((pattern >> i) & 1);
    if (evaluate_inputs(c, bits, wires) == 1) {
      if (v.sat_count == 0) v.witness = bits;
      ++v.sat_count;
    }
  }
  v.classification = classify(v.sat_count, n);
  return v;
}

OracleVerdict brute_force_cone(const Circuit& c, uint32_t gate) {
  // gather the cone: gates and inputs feeding `gate`
  std::vector<uint8_t> in_cone(c.gate_count() + 1, 0);
  std::vector<uint8_t> input_used(c.input_count() + 1, 0);
  std::vector<uint32_t> stack{gate};
  in_cone[gate] = 1;
  while (!stack.empty()) {
    const Gate& g = c.gate(stack.back());
    stack.pop_back();
    for (int k = 0; k < g.arity(); ++k) {
      Var v = g.in[k];
      if (v.is_input()) {
        input_used[v.index] = 1;
      } else if (!in_cone[v.index]) {
        in_cone[v.index] = 1;
        stack.push_back(v.index);
      }
    }
  }
  std::vector<uint32_t> cone_inputs;
  for (uint32_t i = 1; i <= c.input_count(); ++i)
    if (input_used[i]) cone_inputs.push_back(i);

  uint32_t bits_n = uint32_t(cone_inputs.size());
  if (bits_n > 24) throw OracleLimit(bits_n);

  OracleVerdict v;
  v.enumerated_inputs = bits_n;
  std::vector<uint8_t> input_bits(c.input_count() + 1, 0);
  std::vector<uint8_t> wires(c.gate_count() + 1, 0);
  for (uint64_t pattern = 0; pattern < (1ull << bits_n); ++pattern) {
    for (uint32_t k = 0; k < bits_n; ++k)
      input_bits[cone_inputs[k]] = uint8_t((pattern >> k) & 1);
    for (uint32_t j = 1; j <= c.gate_count(); ++j) {
      if (!in_cone[j]) continue;
      const Gate& g = c.gate(j);
      auto value = [&](Var w) {
        return w.is_input() ? input_bits[w.index] : wires[w.index];
      };
      uint8_t a = value(g.in[0]);
      switch (g.kind) {
        case GateKind::And: wires[j] = a & value(g.in[1]); break;
        case GateKind::Or: wires[j] = a | value(g.in[1]); break;
        case GateKind::Not: wires[j] = !a; break;
      }
    }
    if (wires[gate] == 1) {
      if (v.sat_count == 0) {
        std::vector<uint8_t> w(bits_n);
        for (uint32_t k = 0; k < bits_n; ++k) w[k] = input_bits[cone_inputs[k]];
        v.witness = std::move(w);
      }
      ++v.sat_count;
    }
  }
  v.classification = classify(v.sat_count, bits_n);
  return v;
}

}  // namespace csat
