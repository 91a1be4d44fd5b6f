#include "csat/shrink.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace csat {

namespace {

// Renumber helper: keep[j] says gate j survives; gates keep their relative
// order. Returns nullopt when a kept gate references a dropped one.
std::optional<Circuit> rebuild(const Circuit& c, const std::vector<uint8_t>& keep,
                               uint32_t n_inputs) {
  std::vector<uint32_t> new_id(c.gate_count() + 1, 0);
  uint32_t next = 0;
  for (uint32_t j = 1; j <= c.gate_count(); ++j)
    if (keep[j]) new_id[j] = ++next;
  if (next == 0) return std::nullopt;

  std::vector<Gate> gates;
  gates.reserve(next);
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    if (!keep[j]) continue;
    Gate g = c.gate(j);
    for (int k = 0; k < g.arity(); ++k)
      if (!g.in[k].is_input()) {
        if (!new_id[g.in[k].index]) return std::nullopt;
        g.in[k] = Var::gate_out(new_id[g.in[k].index]);
      }
    gates.push_back(g);
  }
  try {
    return Circuit(n_inputs, std::move(gates));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::vector<uint8_t> cone_of(const Circuit& c, uint32_t root) {
  std::vector<uint8_t> keep(c.gate_count() + 1, 0);
  std::vector<uint32_t> stack{root};
  keep[root] = 1;
  while (!stack.empty()) {
    const Gate& g = c.gate(stack.back());
    stack.pop_back();
    for (int k = 0; k < g.arity(); ++k)
      if (!g.in[k].is_input() && !keep[g.in[k].index]) {
        keep[g.in[k].index] = 1;
        stack.push_back(g.in[k].index);
      }
  }
  return keep;
}

// Replace every use of y_gate with `repl` and drop the gate. Bypassing the
// output gate truncates the circuit to the replacement's cone instead.
std::optional<Circuit> bypass_gate(const Circuit& c, uint32_t gate, Var repl) {
  if (gate == c.gate_count()) {
    if (repl.is_input()) return std::nullopt;  // a circuit needs >= 1 gate
    return rebuild(c, cone_of(c, repl.index), c.input_count());
  }
  std::vector<Gate> gates;
  gates.reserve(c.gate_count() - 1);
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    if (j == gate) continue;
    Gate g = c.gate(j);
    for (int k = 0; k < g.arity(); ++k) {
      Var& v = g.in[k];
      if (!v.is_input() && v.index == gate) v = repl;
      if (!v.is_input() && v.index > gate) v = Var::gate_out(v.index - 1);
    }
    gates.push_back(g);
  }
  try {
    return Circuit(c.input_count(), std::move(gates));
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // e.g. the substitution made operands collide
  }
}

std::optional<Circuit> prune_unreachable(const Circuit& c) {
  auto dead = unreachable_gates(c);
  if (dead.empty()) return std::nullopt;
  std::vector<uint8_t> keep(c.gate_count() + 1, 1);
  keep[0] = 0;
  for (uint32_t j : dead) keep[j] = 0;
  return rebuild(c, keep, c.input_count());
}

std::optional<Circuit> drop_unused_inputs(const Circuit& c) {
  std::vector<uint8_t> used(c.input_count() + 1, 0);
  for (const Gate& g : c.gates())
    for (int k = 0; k < g.arity(); ++k)
      if (g.in[k].is_input()) used[g.in[k].index] = 1;
  std::vector<uint32_t> new_idx(c.input_count() + 1, 0);
  uint32_t next = 0;
  for (uint32_t i = 1; i <= c.input_count(); ++i)
    if (used[i]) new_idx[i] = ++next;
  if (next == c.input_count()) return std::nullopt;

  std::vector<Gate> gates(c.gates().begin(), c.gates().end());
  for (Gate& g : gates)
    for (int k = 0; k < g.arity(); ++k)
      if (g.in[k].is_input()) g.in[k] = Var::input(new_idx[g.in[k].index]);
  return Circuit(next, std::move(gates));
}

}  // namespace

Circuit shrink(const Circuit& start, const CircuitPredicate& predicate) {
  Circuit c = start;
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t j = 1; j <= c.gate_count() && !changed; ++j) {
      const Gate& g = c.gate(j);
      for (int k = 0; k < g.arity() && !changed; ++k) {
        auto candidate = bypass_gate(c, j, g.in[k]);
        if (candidate && predicate(*candidate)) {
          c = std::move(*candidate);
          changed = true;
        }
      }
    }
    if (!changed) {
      if (auto candidate = prune_unreachable(c);
          candidate && predicate(*candidate)) {
        c = std::move(*candidate);
        changed = true;
      }
    }
    if (!changed) {
      if (auto candidate = drop_unused_inputs(c);
          candidate && predicate(*candidate)) {
        c = std::move(*candidate);
        changed = true;
      }
    }
  }
  return c;
}

}  // namespace csat
