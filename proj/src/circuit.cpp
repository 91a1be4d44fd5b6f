#include "csat/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace csat {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
  }
  return "?";
}

std::string var_name(Var v) {
  return (v.is_input() ? "x" : "y") + std::to_string(v.index);
}

ConflictingAssignment::ConflictingAssignment(Var v)
    : std::logic_error("conflicting assignment to " + var_name(v)), var(v) {}

MissingInput::MissingInput(Var v)
    : std::runtime_error("missing value for " + var_name(v)), var(v) {}

ParseError::ParseError(int line_, int col_, const std::string& msg)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) +
                         ": " + msg),
      line(line_),
      col(col_) {}

Circuit::Circuit(uint32_t n_inputs, std::vector<Gate> gates)
    : n_(n_inputs), gates_(std::move(gates)) {
  if (gates_.empty()) throw std::invalid_argument("circuit needs at least one gate");
  for (uint32_t j = 1; j <= gate_count(); ++j) {
    const Gate& g = gates_[j - 1];
    for (int k = 0; k < g.arity(); ++k) {
      Var v = g.in[k];
      if (v.index == 0) throw std::invalid_argument("variable index is 1-based");
      if (v.is_input()) {
        if (v.index > n_) throw std::invalid_argument("input index out of range");
      } else {
        if (v.index >= j)
          throw std::invalid_argument("gate operand must have a smaller id");
      }
    }
    if (g.arity() == 2 && g.in[0] == g.in[1])
      throw std::invalid_argument("gate operands must be distinct");
  }
}

void Assignment::set(Var v, uint8_t bit) {
  int8_t& slot = vals_[ord(v)];
  if (slot >= 0 && slot != int8_t(bit)) throw ConflictingAssignment(v);
  slot = int8_t(bit);
}

// --- evaluation -------------------------------------------------------------

static uint8_t apply_gate(GateKind k, uint8_t a, uint8_t b) {
  switch (k) {
    case GateKind::And: return a & b;
    case GateKind::Or: return a | b;
    case GateKind::Not: return !a;
  }
  return 0;
}

uint8_t evaluate_inputs(const Circuit& c, std::span<const uint8_t> input_bits,
                        std::vector<uint8_t>& wires) {
  wires.resize(c.gate_count());
  auto value = [&](Var v) -> uint8_t {
    return v.is_input() ? input_bits[v.index - 1] : wires[v.index - 1];
  };
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    const Gate& g = c.gate(j);
    uint8_t a = value(g.in[0]);
    uint8_t b = g.arity() == 2 ? value(g.in[1]) : 0;
    wires[j - 1] = apply_gate(g.kind, a, b);
  }
  return wires[c.gate_count() - 1];
}

EvalResult evaluate_full(const Circuit& c, const Assignment& a) {
  std::vector<uint8_t> bits(c.input_count());
  for (uint32_t i = 1; i <= c.input_count(); ++i) {
    auto v = a.get(Var::input(i));
    if (!v) throw MissingInput(Var::input(i));
    bits[i - 1] = *v;
  }
  EvalResult r;
  r.output = evaluate_inputs(c, bits, r.wires);
  return r;
}

uint8_t evaluate(const Circuit& c, const Assignment& a) {
  return evaluate_full(c, a).output;
}

// --- structural classification ----------------------------------------------

static std::vector<uint32_t> wire_fanout(const Circuit& c) {
  // fanout[ord] = number of gate input slots consuming the wire
  std::vector<uint32_t> fanout(c.var_count(), 0);
  for (const Gate& g : c.gates())
    for (int k = 0; k < g.arity(); ++k) ++fanout[c.var_ord(g.in[k])];
  return fanout;
}

StructureClass classify_structure(const Circuit& c) {
  StructureClass sc;
  auto fanout = wire_fanout(c);

  sc.monotone = std::none_of(c.gates().begin(), c.gates().end(),
                             [](const Gate& g) { return g.kind == GateKind::Not; });

  sc.tree = true;
  for (uint32_t ord = 0; ord < c.var_count(); ++ord) {
    if (c.var_at(ord) == c.output()) continue;
    if (fanout[ord] != 1) { sc.tree = false; break; }
  }

  sc.not_on_unbranched_wires = true;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Not && fanout[c.var_ord(g.in[0])] != 1) {
      sc.not_on_unbranched_wires = false;
      break;
    }
  return sc;
}

std::vector<uint32_t> unreachable_gates(const Circuit& c) {
  std::vector<uint8_t> reach(c.gate_count() + 1, 0);
  std::vector<uint32_t> stack{c.gate_count()};
  reach[c.gate_count()] = 1;
  while (!stack.empty()) {
    uint32_t j = stack.back();
    stack.pop_back();
    const Gate& g = c.gate(j);
    for (int k = 0; k < g.arity(); ++k)
      if (!g.in[k].is_input() && !reach[g.in[k].index]) {
        reach[g.in[k].index] = 1;
        stack.push_back(g.in[k].index);
      }
  }
  std::vector<uint32_t> out;
  for (uint32_t j = 1; j <= c.gate_count(); ++j)
    if (!reach[j]) out.push_back(j);
  return out;
}

// --- parser -------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view s;
  int line;
  size_t pos = 0;

  int col() const { return int(pos) + 1; }
  bool eol() { skip_ws(); return pos >= s.size(); }
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  void expect(char ch) {
    skip_ws();
    if (pos >= s.size() || s[pos] != ch)
      throw ParseError(line, col(), std::string("expected '") + ch + "'");
    ++pos;
  }
  bool peek(char ch) {
    skip_ws();
    return pos < s.size() && s[pos] == ch;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    if (pos >= s.size() || !(std::isalpha((unsigned char)s[pos]) || s[pos] == '_'))
      throw ParseError(line, col(), "expected identifier");
    while (pos < s.size() &&
           (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
      ++pos;
    return std::string(s.substr(start, pos - start));
  }
};

struct RawGate {
  GateKind kind;
  std::vector<std::string> args;
  int line;
  int def_order;
};

}  // namespace

Circuit parse_circuit(std::string_view text) {
  std::vector<std::string> input_names;              // declaration order
  std::map<std::string, uint32_t> input_id;          // name -> 1..n
  std::map<std::string, RawGate> gate_defs;          // name -> definition
  std::string output_name;
  int output_line = 0;

  int line_no = 0;
  size_t start = 0;
  int def_order = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++line_no;
    start = end + 1;

    Cursor c{raw, line_no};
    if (c.eol() || c.peek('#')) continue;

    std::string head = c.ident();
    if (head == "INPUT" || head == "OUTPUT") {
      c.expect('(');
      std::string name = c.ident();
      c.expect(')');
      if (!c.eol()) throw ParseError(line_no, c.col(), "trailing characters");
      if (head == "INPUT") {
        if (input_id.count(name) || gate_defs.count(name))
          throw ParseError(line_no, 1, "'" + name + "' defined twice");
        input_id[name] = uint32_t(input_names.size()) + 1;
        input_names.push_back(name);
      } else {
        if (!output_name.empty())
          throw ParseError(line_no, 1, "multiple OUTPUT lines");
        output_name = name;
        output_line = line_no;
      }
      continue;
    }

    // gate definition: name = OP(a[, b])
    c.expect('=');
    int op_col = c.col();
    std::string op = c.ident();
    RawGate rg;
    rg.line = line_no;
    rg.def_order = def_order++;
    if (op == "AND") rg.kind = GateKind::And;
    else if (op == "OR") rg.kind = GateKind::Or;
    else if (op == "NOT") rg.kind = GateKind::Not;
    else throw ParseError(line_no, op_col, "unknown operator '" + op + "'");
    c.expect('(');
    rg.args.push_back(c.ident());
    while (c.peek(',')) {
      c.expect(',');
      rg.args.push_back(c.ident());
    }
    c.expect(')');
    if (!c.eol()) throw ParseError(line_no, c.col(), "trailing characters");
    if (int(rg.args.size()) != gate_arity(rg.kind))
      throw ParseError(line_no, op_col,
                       op + " takes " + std::to_string(gate_arity(rg.kind)) +
                           " operand(s), got " + std::to_string(rg.args.size()));
    if (rg.args.size() == 2 && rg.args[0] == rg.args[1])
      throw ParseError(line_no, op_col, "operands must be distinct");
    if (input_id.count(head) || gate_defs.count(head))
      throw ParseError(line_no, 1, "'" + head + "' defined twice");
    gate_defs.emplace(head, std::move(rg));
  }

  if (output_name.empty()) throw ParseError(line_no, 1, "missing OUTPUT line");
  auto out_it = gate_defs.find(output_name);
  if (out_it == gate_defs.end()) {
    if (input_id.count(output_name))
      throw ParseError(output_line, 1, "OUTPUT must name a gate, not an input");
    throw ParseError(output_line, 1, "undefined identifier '" + output_name + "'");
  }
  for (const auto& [name, rg] : gate_defs)
    for (const std::string& a : rg.args) {
      if (!input_id.count(a) && !gate_defs.count(a))
        throw ParseError(rg.line, 1, "undefined identifier '" + a + "'");
      if (a == output_name && name != output_name)
        throw ParseError(rg.line, 1, "output wire '" + a + "' feeds a gate");
    }

  // Topological relabeling (Kahn), stable by definition order; the output
  // gate gets id m. Nothing may consume the output wire (checked above), so
  // deferring it to the end is always possible.
  std::vector<const std::string*> def_name(gate_defs.size());
  std::vector<const RawGate*> def_gate(gate_defs.size());
  std::map<std::string, int> def_index;
  for (const auto& [name, rg] : gate_defs) {
    def_name[rg.def_order] = &name;
    def_gate[rg.def_order] = &rg;
    def_index.emplace(name, rg.def_order);
  }
  std::vector<std::vector<int>> consumers(gate_defs.size());
  std::vector<int> waiting(gate_defs.size(), 0);
  for (size_t d = 0; d < def_gate.size(); ++d)
    for (const std::string& a : def_gate[d]->args)
      if (auto it = def_index.find(a); it != def_index.end()) {
        consumers[it->second].push_back(int(d));
        ++waiting[d];
      }

  int out_def = def_index.at(output_name);
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (size_t d = 0; d < def_gate.size(); ++d)
    if (waiting[d] == 0 && int(d) != out_def) ready.push(int(d));

  std::vector<const std::string*> order_names;
  std::map<std::string, uint32_t> gate_id;
  bool out_ready = waiting[out_def] == 0;
  while (!ready.empty()) {
    int d = ready.top();
    ready.pop();
    gate_id[*def_name[d]] = uint32_t(gate_id.size()) + 1;
    order_names.push_back(def_name[d]);
    for (int consumer : consumers[d])
      if (--waiting[consumer] == 0) {
        if (consumer == out_def) out_ready = true;
        else ready.push(consumer);
      }
  }
  if (!out_ready || order_names.size() + 1 != gate_defs.size()) {
    for (size_t d = 0; d < def_gate.size(); ++d)
      if (waiting[d] > 0 || (int(d) == out_def && !out_ready))
        throw ParseError(def_gate[d]->line, 1,
                         "combinational cycle through '" + *def_name[d] + "'");
  }
  gate_id[output_name] = uint32_t(gate_id.size()) + 1;
  order_names.push_back(&out_it->first);

  uint32_t n = uint32_t(input_names.size());
  std::vector<Gate> gates;
  gates.reserve(order_names.size());
  for (const std::string* name : order_names) {
    const RawGate& rg = gate_defs.at(*name);
    Gate g;
    g.kind = rg.kind;
    for (size_t k = 0; k < rg.args.size(); ++k) {
      auto it = input_id.find(rg.args[k]);
      g.in[k] = it != input_id.end() ? Var::input(it->second)
                                     : Var::gate_out(gate_id.at(rg.args[k]));
    }
    gates.push_back(g);
  }
  return Circuit(n, std::move(gates));
}

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream os;
  for (uint32_t i = 1; i <= c.input_count(); ++i) os << "INPUT(x" << i << ")\n";
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    const Gate& g = c.gate(j);
    os << "y" << j << " = " << gate_kind_name(g.kind) << "(" << var_name(g.in[0]);
    if (g.arity() == 2) os << ", " << var_name(g.in[1]);
    os << ")\n";
  }
  os << "OUTPUT(y" << c.gate_count() << ")\n";
  return os.str();
}

}  // namespace csat
