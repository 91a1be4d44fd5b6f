#pragma once

// Reverse-execution solve loop over the truth tables.
//
// solve() pins the output to 1 and works backwards: gates whose degree drops
// to 1 force all variables of their sole surviving row; when nothing is
// forced, a value is picked for an input pin of some gate with degree 2 or 3
// (free choice); inputs touching no live block default to 0. There is no
// backtracking: a contradiction reached before any decision is a sound UNSAT,
// one reached after a decision is reported as a heuristic failure. SAT is
// only ever returned after the extracted assignment re-evaluates to 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "csat/circuit.hpp"
#include "csat/tables.hpp"

namespace csat {

// --- trace -------------------------------------------------------------------

struct TraceEvent {
  enum class Type { Set, Delete, Force, Decide, Default, Mark, Fail };
  Type type = Type::Set;
  Var var{};
  uint8_t bit = 0;
  uint32_t gate = 0;                // Force: forcing gate; Decide: chosen gate
  uint32_t row = 0;                 // Force: forcing row
  std::vector<uint32_t> rows;       // Delete
  std::string tag;                  // Decide: "det" | "rand" | "script"
  std::string reason;               // Fail

  static TraceEvent set(Var v, uint8_t b);
  static TraceEvent del(std::vector<uint32_t> rows);
  static TraceEvent force(Var v, uint8_t b, uint32_t gate, uint32_t row);
  static TraceEvent decide(Var v, uint8_t b, uint32_t gate, std::string tag);
  static TraceEvent fallback(Var v);
  static TraceEvent mark(uint32_t gate, uint8_t b);
  static TraceEvent fail(std::string reason);

  std::string to_text() const;  // "FORCE y1=1 G3 r10" etc.
  bool operator==(const TraceEvent&) const = default;
};

std::string trace_to_text(const std::vector<TraceEvent>& trace);

// --- decision policies --------------------------------------------------------

struct DecisionPolicy {
  enum class Kind { Deterministic, SeededRandom, Scripted };
  Kind kind = Kind::Deterministic;
  uint64_t seed = 0;
  std::vector<std::pair<Var, uint8_t>> script;

  static DecisionPolicy deterministic() { return {}; }
  static DecisionPolicy seeded(uint64_t seed) {
    return {Kind::SeededRandom, seed, {}};
  }
  static DecisionPolicy scripted(std::vector<std::pair<Var, uint8_t>> s) {
    return {Kind::Scripted, 0, std::move(s)};
  }
};

struct ScriptConflict : std::logic_error {
  explicit ScriptConflict(Var v);
  Var var;
};

struct Decision {
  Var var{};
  uint8_t bit = 0;
  uint32_t gate = 0;  // 0 when the variable occurs in no block
  const char* tag = "det";
};

// Stateful chooser (script cursor / RNG live here).
class DecisionMaker {
 public:
  explicit DecisionMaker(DecisionPolicy policy);

  // Picks an input pin of a gate with degree 2 or 3 (deterministic order:
  // lowest degree, then lowest gate id, then lowest variable ordinal; bit =
  // majority over the block's live rows, ties to 1). Degree-4 gates are a
  // fallback so disconnected structure still terminates. nullopt when no
  // gate with degree 2..4 has an unassigned variable. An exhausted script
  // falls back to the deterministic rule.
  std::optional<Decision> choose(const Tables& t);

 private:
  DecisionPolicy policy_;
  size_t cursor_ = 0;
  std::mt19937_64 rng_;
};

// --- propagation ---------------------------------------------------------------

struct PropagationStep {
  Var var{};
  uint8_t bit = 0;
  uint32_t gate = 0;  // degree-1 gate that forced it
  uint32_t row = 0;   // its sole live row
  std::vector<uint32_t> deleted_rows;
};

struct PropagationReport {
  std::vector<PropagationStep> steps;
  std::optional<uint32_t> contradiction_gate;
};

// Degree-1 fixpoint: every gate at degree 1 assigns all unassigned variables
// of its sole live row (cell order), cascading until no such gate remains or
// some block empties.
PropagationReport propagate_degree1(Tables& t);

// --- solving -------------------------------------------------------------------

struct UnassignedInput : std::runtime_error {
  explicit UnassignedInput(Var v);
  Var var;
};

// Total input assignment; inputs occurring in no block default to 0, inputs
// that do occur must already be assigned (UnassignedInput otherwise).
Assignment extract_solution(const Tables& t);

enum class OutcomeKind { Sat, Unsat, Tautology, Failure };

struct SolveOutcome {
  OutcomeKind kind = OutcomeKind::Failure;
  Assignment inputs;   // total on inputs, Sat only
  std::string reason;  // Failure only
};

struct SolveStats {
  uint64_t probes = 0;          // preprocessing probes performed
  uint64_t forces = 0;
  uint64_t decisions = 0;
  uint64_t defaults = 0;
  uint64_t net_deletions = 0;   // rows dead when the run ended
  uint64_t iterations = 0;
};

enum class MarkKind : uint8_t { Tautology, Contradiction };

// A permanently fixed gate output discovered by preprocessing.
struct Mark {
  uint32_t gate = 0;
  uint8_t fixed_bit = 0;
  MarkKind kind = MarkKind::Contradiction;
  bool operator==(const Mark&) const = default;
};

struct SolveResult {
  SolveOutcome outcome;
  std::vector<TraceEvent> trace;
  SolveStats stats;
  std::vector<Mark> marks;  // from preprocessing, empty when disabled
};

SolveResult solve(const Circuit& c, const DecisionPolicy& policy,
                  bool preprocess = true);

}  // namespace csat
