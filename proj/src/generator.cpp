#include "csat/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace csat {

const char* circuit_class_name(CircuitClass c) {
  switch (c) {
    case CircuitClass::General: return "general";
    case CircuitClass::Monotone: return "monotone";
    case CircuitClass::Tree: return "tree";
    case CircuitClass::NotOnUnbranched: return "not_on_unbranched";
  }
  return "?";
}

CircuitClass circuit_class_from_name(std::string_view name) {
  if (name == "general") return CircuitClass::General;
  if (name == "monotone") return CircuitClass::Monotone;
  if (name == "tree") return CircuitClass::Tree;
  if (name == "not_on_unbranched") return CircuitClass::NotOnUnbranched;
  throw std::runtime_error("unknown circuit class '" + std::string(name) + "'");
}

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  uint64_t below(uint64_t k) { return gen() % k; }  // k >= 1
  bool flip() { return gen() & 1; }
};

GateKind pick_binary_kind(Rng& rng, const GenConfig& cfg) {
  double total = cfg.and_weight + cfg.or_weight;
  double x = double(rng.gen() % 1000000) / 1000000.0 * total;
  return x < cfg.and_weight ? GateKind::And : GateKind::Or;
}

GateKind pick_kind(Rng& rng, const GenConfig& cfg, bool allow_not) {
  double notw = allow_not ? cfg.not_weight : 0.0;
  double total = cfg.and_weight + cfg.or_weight + notw;
  double x = double(rng.gen() % 1000000) / 1000000.0 * total;
  if (x < cfg.and_weight) return GateKind::And;
  if (x < cfg.and_weight + cfg.or_weight) return GateKind::Or;
  return GateKind::Not;
}

// Wires each gate j < m into some higher gate with a free slot, which keeps
// every gate on a path to the output. Always succeeds: the gates above j
// hold at least one more slot than the edges still to be placed.
// Returns per-gate operand lists (child edges only, slots still open).
std::vector<std::vector<Var>> spanning_edges(const std::vector<GateKind>& kinds,
                                             Rng& rng) {
  uint32_t m = uint32_t(kinds.size());
  std::vector<std::vector<Var>> pins(m + 1);
  std::vector<int> free_slots(m + 1);
  for (uint32_t j = 1; j <= m; ++j) free_slots[j] = gate_arity(kinds[j - 1]);

  std::vector<uint32_t> open;  // gates with a free slot, ids > current j
  for (uint32_t j = m - 1; j >= 1; --j) {
    open.clear();
    for (uint32_t g = j + 1; g <= m; ++g)
      if (free_slots[g] > 0) open.push_back(g);
    uint32_t parent = open[rng.below(open.size())];
    pins[parent].push_back(Var::gate_out(j));
    --free_slots[parent];
  }
  return pins;
}

Circuit build_verified(uint32_t n, std::vector<Gate> gates, CircuitClass cls) {
  Circuit c(n, std::move(gates));
  StructureClass sc = classify_structure(c);
  bool ok = true;
  switch (cls) {
    case CircuitClass::General: break;
    case CircuitClass::Monotone: ok = sc.monotone; break;
    case CircuitClass::Tree: ok = sc.tree; break;
    case CircuitClass::NotOnUnbranched: ok = sc.not_on_unbranched_wires; break;
  }
  if (!ok || !unreachable_gates(c).empty())
    throw std::logic_error("generator produced a circuit outside its class");
  return c;
}

Circuit generate_tree(const GenConfig& cfg, Rng& rng) {
  uint32_t n = cfg.inputs, m = cfg.gates;
  // #binary gates is pinned by the leaf count: 2A + N slots, m-1 child edges,
  // n leaves => A = n - 1.
  if (n < 1) throw InfeasibleConfig("tree needs at least one input");
  if (n - 1 > m) throw InfeasibleConfig("tree with n inputs needs >= n-1 gates");
  uint32_t binary = n - 1;

  std::vector<GateKind> kinds(m, GateKind::Not);
  std::vector<uint32_t> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  for (uint32_t k = 0; k < binary; ++k) {
    uint32_t pick = uint32_t(k + rng.below(m - k));
    std::swap(ids[k], ids[pick]);
    kinds[ids[k]] = pick_binary_kind(rng, cfg);
  }

  auto pins = spanning_edges(kinds, rng);
  std::vector<uint32_t> leaf_inputs(n);
  std::iota(leaf_inputs.begin(), leaf_inputs.end(), 1);
  std::shuffle(leaf_inputs.begin(), leaf_inputs.end(), rng.gen);

  size_t next_leaf = 0;
  std::vector<Gate> gates(m);
  for (uint32_t j = 1; j <= m; ++j) {
    Gate& g = gates[j - 1];
    g.kind = kinds[j - 1];
    auto& p = pins[j];
    while (int(p.size()) < g.arity()) p.push_back(Var::input(leaf_inputs[next_leaf++]));
    for (int k = 0; k < g.arity(); ++k) g.in[k] = p[k];
  }
  return build_verified(n, std::move(gates), CircuitClass::Tree);
}

Circuit generate_flat(const GenConfig& cfg, Rng& rng) {
  // General / Monotone / NotOnUnbranched share a skeleton: spanning edges up,
  // leftover slots drawn from earlier wires. NOT inputs must stay private
  // (fan-out 1) for NotOnUnbranched, so wires feeding a NOT leave the pool.
  uint32_t n = cfg.inputs, m = cfg.gates;
  bool monotone = cfg.cls == CircuitClass::Monotone;
  bool private_nots = cfg.cls == CircuitClass::NotOnUnbranched;
  if (n < 1) throw InfeasibleConfig("need at least one input");

  std::vector<GateKind> kinds(m);
  for (uint32_t j = 1; j <= m; ++j) {
    // gate 1 with a single input cannot be binary (operands must differ)
    bool binary_possible = n + (j - 1) >= 2;
    if (!binary_possible && monotone)
      throw InfeasibleConfig("monotone binary gate needs two distinct wires");
    kinds[j - 1] = binary_possible ? pick_kind(rng, cfg, !monotone)
                                   : GateKind::Not;
  }

  auto pins = spanning_edges(kinds, rng);

  std::vector<uint8_t> blocked(n + m + 1, 0);   // by var ordinal + 1 scheme below
  auto ord = [&](Var v) { return v.is_input() ? v.index : n + v.index; };
  if (private_nots)
    for (uint32_t j = 1; j <= m; ++j)
      if (kinds[j - 1] == GateKind::Not && !pins[j].empty())
        blocked[ord(pins[j][0])] = 1;

  std::vector<uint8_t> input_used(n + 1, 0);

  std::vector<Gate> gates(m);
  for (uint32_t j = 1; j <= m; ++j) {
    Gate& g = gates[j - 1];
    g.kind = kinds[j - 1];
    auto& p = pins[j];

    if (g.kind == GateKind::Not && p.empty() && private_nots) {
      // reserve an input nobody else touches
      std::vector<uint32_t> candidates;
      for (uint32_t i = 1; i <= n; ++i)
        if (!input_used[i] && !blocked[i]) candidates.push_back(i);
      if (candidates.empty())
        throw InfeasibleConfig("ran out of private inputs for NOT gates");
      uint32_t i = candidates[rng.below(candidates.size())];
      blocked[i] = 1;
      input_used[i] = 1;
      p.push_back(Var::input(i));
    }

    while (int(p.size()) < g.arity()) {
      // draw from unblocked inputs and earlier unblocked wires, distinct pins
      std::vector<Var> pool;
      for (uint32_t i = 1; i <= n; ++i)
        if (!blocked[i]) pool.push_back(Var::input(i));
      for (uint32_t k = 1; k < j; ++k)
        if (!blocked[n + k]) pool.push_back(Var::gate_out(k));
      std::erase_if(pool, [&](Var v) {
        return std::find(p.begin(), p.end(), v) != p.end();
      });
      if (pool.empty())
        throw InfeasibleConfig("no free wire left for gate operand");
      Var v = pool[rng.below(pool.size())];
      if (private_nots && g.kind == GateKind::Not) blocked[ord(v)] = 1;
      if (v.is_input()) input_used[v.index] = 1;
      p.push_back(v);
    }
    for (int k = 0; k < g.arity(); ++k) g.in[k] = p[k];
  }
  return build_verified(n, std::move(gates), cfg.cls);
}

}  // namespace

Circuit generate(const GenConfig& cfg) {
  if (cfg.gates < 1) throw InfeasibleConfig("need at least one gate");
  if (cfg.cls == CircuitClass::Tree) {
    Rng rng(cfg.seed);
    return generate_tree(cfg, rng);
  }
  // NotOnUnbranched can paint itself into a corner (no private input left);
  // give it a few reseeded attempts before giving up.
  int attempts = cfg.cls == CircuitClass::NotOnUnbranched ? 64 : 1;
  for (int a = 0;; ++a) {
    try {
      Rng rng(cfg.seed + uint64_t(a) * 0x9e3779b97f4a7c15ull);
      return generate_flat(cfg, rng);
    } catch (const InfeasibleConfig&) {
      if (a + 1 >= attempts) throw;
    }
  }
}

Circuit make_and_chain(uint32_t m) {
  std::vector<Gate> gates(m);
  gates[0] = Gate{GateKind::And, {Var::input(1), Var::input(2)}};
  for (uint32_t j = 2; j <= m; ++j)
    gates[j - 1] = Gate{GateKind::And, {Var::gate_out(j - 1), Var::input(j + 1)}};
  return Circuit(m + 1, std::move(gates));
}

}  // namespace csat
