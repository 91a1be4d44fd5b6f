#include "csat/preprocess.hpp"

#include <sstream>

namespace csat {

ProbeResult probe_gate(Tables& t, uint32_t gate, uint8_t hypothesis) {
  DeletionReport rep = t.assign(Var::gate_out(gate), hypothesis);
  if (rep.contradiction_gate) return ProbeResult::Contradiction;
  PropagationReport prop = propagate_degree1(t);
  return prop.contradiction_gate ? ProbeResult::Contradiction
                                 : ProbeResult::Consistent;
}

namespace {

// Follow a wire through any chain of NOT gates to its driver.
Var resolve_through_nots(const Circuit& c, Var v) {
  while (!v.is_input() && c.gate(v.index).kind == GateKind::Not)
    v = c.gate(v.index).in[0];
  return v;
}

struct Walker {
  Tables& t;
  const Circuit& c;
  PreprocessReport& report;
  std::vector<TraceEvent>* trace;
  std::vector<uint8_t> visited;

  void emit(TraceEvent e) {
    if (trace) trace->push_back(std::move(e));
  }

  void visit(uint32_t gate) {  // gate is AND or OR
    if (visited[gate]) return;
    visited[gate] = 1;

    const Gate& g = c.gate(gate);
    for (int k = 0; k < g.arity(); ++k) {
      Var driver = resolve_through_nots(c, g.in[k]);
      if (!driver.is_input()) visit(driver.index);
    }
    report.tested.push_back(gate);

    Var out = Var::gate_out(gate);
    if (t.assigned(out)) return;  // fixed by an earlier mark's propagation

    uint8_t hypothesis = g.kind == GateKind::And ? 1 : 0;
    TablesSnapshot snap = t.snapshot();
    ++report.probes;
    ProbeResult probe = probe_gate(t, gate, hypothesis);
    t.restore(snap);
    if (probe == ProbeResult::Consistent) return;

    // The hypothesis is impossible whatever the inputs do: the opposite
    // value is a constant of the subcircuit. Fix it and propagate.
    uint8_t fixed = uint8_t(!hypothesis);
    Mark mark{gate, fixed,
              g.kind == GateKind::And ? MarkKind::Contradiction
                                      : MarkKind::Tautology};
    report.marks.push_back(mark);
    emit(TraceEvent::mark(gate, fixed));
    emit(TraceEvent::set(out, fixed));
    DeletionReport rep = t.assign(out, fixed);
    if (trace && !rep.deleted_rows.empty())
      trace->push_back(TraceEvent::del(std::move(rep.deleted_rows)));
    // Sound facts alone cannot empty a block: every input assignment is a
    // model of the bare gate system.
    if (rep.contradiction_gate)
      throw std::logic_error("contradiction while propagating a sound mark");
    PropagationReport prop = propagate_degree1(t);
    for (PropagationStep& s : prop.steps) {
      emit(TraceEvent::force(s.var, s.bit, s.gate, s.row));
      if (trace && !s.deleted_rows.empty())
        trace->push_back(TraceEvent::del(std::move(s.deleted_rows)));
    }
    if (prop.contradiction_gate)
      throw std::logic_error("contradiction while propagating a sound mark");
  }
};

}  // namespace

PreprocessReport preprocess(Tables& t, std::vector<TraceEvent>* trace) {
  const Circuit& c = t.circuit();
  PreprocessReport report;
  Walker walker{t, c, report, trace,
                std::vector<uint8_t>(c.gate_count() + 1, 0)};

  Var root = resolve_through_nots(c, c.output());
  if (!root.is_input()) walker.visit(root.index);

  if (auto out = t.value(c.output())) {
    report.outcome = *out ? PreprocessReport::Outcome::CircuitTautology
                          : PreprocessReport::Outcome::CircuitContradiction;
  }
  return report;
}

std::string report_to_text(const PreprocessReport& r) {
  std::ostringstream os;
  for (const Mark& m : r.marks)
    os << "mark G" << m.gate << ' ' << var_name(Var::gate_out(m.gate)) << '='
       << int(m.fixed_bit) << ' '
       << (m.kind == MarkKind::Contradiction ? "contradiction" : "tautology")
       << '\n';
  switch (r.outcome) {
    case PreprocessReport::Outcome::Open: os << "outcome open\n"; break;
    case PreprocessReport::Outcome::CircuitTautology:
      os << "outcome tautology\n";
      break;
    case PreprocessReport::Outcome::CircuitContradiction:
      os << "outcome contradiction\n";
      break;
  }
  return os.str();
}

}  // namespace csat
