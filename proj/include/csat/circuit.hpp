#pragma once

// Gate-level combinational circuit IR.
//
// Inputs are labelled x1..xn, gates G1..Gm with outputs y1..ym; gate ids are
// topological (every gate input produced by a gate with a smaller id) and the
// circuit output is always ym. Circuits are immutable after construction and
// safe to share across threads.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csat {

enum class GateKind : uint8_t { And, Or, Not };

const char* gate_kind_name(GateKind k);
inline int gate_arity(GateKind k) { return k == GateKind::Not ? 1 : 2; }

// A wire: primary input x_i (1 <= i <= n) or gate output y_j (1 <= j <= m).
struct Var {
  enum class Kind : uint8_t { Input, GateOut };
  Kind kind{Kind::Input};
  uint32_t index{0};  // 1-based

  static Var input(uint32_t i) { return {Kind::Input, i}; }
  static Var gate_out(uint32_t j) { return {Kind::GateOut, j}; }
  bool is_input() const { return kind == Kind::Input; }
  bool operator==(const Var&) const = default;
};

std::string var_name(Var v);  // "x3", "y2"

struct Gate {
  GateKind kind{GateKind::And};
  std::array<Var, 2> in{};  // in[0 .. arity-1] are valid
  int arity() const { return gate_arity(kind); }
  bool operator==(const Gate&) const = default;
};

class Circuit {
 public:
  // Validates: m >= 1, arity matches kind, operands distinct, every gate
  // operand in range and topologically earlier. Throws std::invalid_argument.
  Circuit(uint32_t n_inputs, std::vector<Gate> gates);

  uint32_t input_count() const { return n_; }
  uint32_t gate_count() const { return static_cast<uint32_t>(gates_.size()); }
  const Gate& gate(uint32_t j) const { return gates_[j - 1]; }  // 1-based
  std::span<const Gate> gates() const { return gates_; }
  Var output() const { return Var::gate_out(gate_count()); }

  // Dense variable ordinals: x1..xn -> 0..n-1, y1..ym -> n..n+m-1. This is
  // also the column order of the truth tables and of canonical text output.
  uint32_t var_count() const { return n_ + gate_count(); }
  uint32_t var_ord(Var v) const {
    return v.is_input() ? v.index - 1 : n_ + v.index - 1;
  }
  Var var_at(uint32_t ord) const {
    return ord < n_ ? Var::input(ord + 1) : Var::gate_out(ord - n_ + 1);
  }

  bool operator==(const Circuit&) const = default;

 private:
  uint32_t n_;
  std::vector<Gate> gates_;
};

// Partial map Var -> bit. At most one value per variable.
class Assignment {
 public:
  Assignment() = default;
  Assignment(uint32_t n_inputs, uint32_t n_gates)
      : n_(n_inputs), vals_(n_inputs + n_gates, -1) {}

  bool has(Var v) const { return vals_[ord(v)] >= 0; }
  std::optional<uint8_t> get(Var v) const {
    int8_t x = vals_[ord(v)];
    return x < 0 ? std::nullopt : std::optional<uint8_t>(uint8_t(x));
  }
  // Throws ConflictingAssignment when v is already bound to the other bit.
  void set(Var v, uint8_t bit);
  uint32_t input_count() const { return n_; }
  size_t size() const { return vals_.size(); }

 private:
  uint32_t ord(Var v) const { return v.is_input() ? v.index - 1 : n_ + v.index - 1; }
  uint32_t n_ = 0;
  std::vector<int8_t> vals_;
};

struct ConflictingAssignment : std::logic_error {
  explicit ConflictingAssignment(Var v);
  Var var;
};

struct MissingInput : std::runtime_error {
  explicit MissingInput(Var v);
  Var var;
};

// --- evaluation -------------------------------------------------------------

// Value of ym under a total input assignment; throws MissingInput.
uint8_t evaluate(const Circuit& c, const Assignment& a);

struct EvalResult {
  uint8_t output;
  std::vector<uint8_t> wires;  // wires[j-1] = y_j
};
EvalResult evaluate_full(const Circuit& c, const Assignment& a);

// Hot path for enumeration: input_bits[i-1] = x_i, scratch reused per call.
uint8_t evaluate_inputs(const Circuit& c, std::span<const uint8_t> input_bits,
                        std::vector<uint8_t>& wire_scratch);

// --- structural classification ----------------------------------------------

struct StructureClass {
  bool monotone = false;                 // no NOT gate
  bool tree = false;                     // every non-output wire has fan-out 1
  bool not_on_unbranched_wires = false;  // every NOT input wire has fan-out 1
  bool operator==(const StructureClass&) const = default;
};

StructureClass classify_structure(const Circuit& c);

// Gate ids not feeding the output, ascending. Legal but usually a mistake.
std::vector<uint32_t> unreachable_gates(const Circuit& c);

// --- netlist text format ------------------------------------------------------
//
//   INPUT(a)
//   w = AND(a, b) | OR(a, b) | NOT(a)
//   OUTPUT(w)
//   # comment
//
// Definitions may appear in any order; the parser topologically relabels
// gates 1..m (stable by definition order, output gate last) and inputs 1..n
// in declaration order. Exactly one OUTPUT, naming a gate.

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& msg);
  int line;
  int col;
};

Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& c);  // canonical x1../y1.. names

}  // namespace csat
