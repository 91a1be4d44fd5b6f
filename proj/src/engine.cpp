#include "csat/engine.hpp"

#include <algorithm>
#include <sstream>

#include "csat/preprocess.hpp"

namespace csat {

ScriptConflict::ScriptConflict(Var v)
    : std::logic_error("scripted decision conflicts with assignment to " +
                       var_name(v)),
      var(v) {}

UnassignedInput::UnassignedInput(Var v)
    : std::runtime_error("input " + var_name(v) + " not yet assigned"), var(v) {}

// --- trace -------------------------------------------------------------------

TraceEvent TraceEvent::set(Var v, uint8_t b) {
  TraceEvent e;
  e.type = Type::Set;
  e.var = v;
  e.bit = b;
  return e;
}
TraceEvent TraceEvent::del(std::vector<uint32_t> rows) {
  TraceEvent e;
  e.type = Type::Delete;
  e.rows = std::move(rows);
  return e;
}
TraceEvent TraceEvent::force(Var v, uint8_t b, uint32_t gate, uint32_t row) {
  TraceEvent e;
  e.type = Type::Force;
  e.var = v;
  e.bit = b;
  e.gate = gate;
  e.row = row;
  return e;
}
TraceEvent TraceEvent::decide(Var v, uint8_t b, uint32_t gate, std::string tag) {
  TraceEvent e;
  e.type = Type::Decide;
  e.var = v;
  e.bit = b;
  e.gate = gate;
  e.tag = std::move(tag);
  return e;
}
TraceEvent TraceEvent::fallback(Var v) {
  TraceEvent e;
  e.type = Type::Default;
  e.var = v;
  e.bit = 0;
  return e;
}
TraceEvent TraceEvent::mark(uint32_t gate, uint8_t b) {
  TraceEvent e;
  e.type = Type::Mark;
  e.gate = gate;
  e.var = Var::gate_out(gate);
  e.bit = b;
  return e;
}
TraceEvent TraceEvent::fail(std::string reason) {
  TraceEvent e;
  e.type = Type::Fail;
  e.reason = std::move(reason);
  return e;
}

std::string TraceEvent::to_text() const {
  std::ostringstream os;
  switch (type) {
    case Type::Set:
      os << "SET " << var_name(var) << '=' << int(bit);
      break;
    case Type::Delete: {
      os << "DEL ";
      for (size_t k = 0; k < rows.size(); ++k)
        os << (k ? "," : "") << rows[k];
      break;
    }
    case Type::Force:
      os << "FORCE " << var_name(var) << '=' << int(bit) << " G" << gate << " r"
         << row;
      break;
    case Type::Decide:
      os << "DECIDE " << var_name(var) << '=' << int(bit) << ' ';
      if (gate) os << 'G' << gate;
      else os << '-';
      os << ' ' << tag;
      break;
    case Type::Default:
      os << "DEFAULT " << var_name(var) << "=0";
      break;
    case Type::Mark:
      os << "MARK G" << gate << ' ' << var_name(var) << '=' << int(bit);
      break;
    case Type::Fail:
      os << "FAIL " << reason;
      break;
  }
  return os.str();
}

std::string trace_to_text(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const TraceEvent& e : trace) {
    out += e.to_text();
    out += '\n';
  }
  return out;
}

// --- propagation ---------------------------------------------------------------

PropagationReport propagate_degree1(Tables& t) {
  const Circuit& c = t.circuit();
  PropagationReport rep;
  std::vector<uint32_t> queue;
  std::vector<uint8_t> queued(c.gate_count() + 1, 0);
  auto push = [&](uint32_t gate) {
    if (!queued[gate]) {
      queued[gate] = 1;
      queue.push_back(gate);
    }
  };
  for (uint32_t j = 1; j <= c.gate_count(); ++j)
    if (t.degree(j) == 1) push(j);

  for (size_t head = 0; head < queue.size(); ++head) {
    uint32_t gate = queue[head];
    queued[gate] = 0;
    if (t.degree(gate) != 1) continue;
    uint32_t row_id = *t.sole_live_row(gate);
    const CttRow& row = t.row(row_id);
    for (int k = 0; k < row.cell_count; ++k) {
      Var v = c.var_at(row.cells[k].var);
      if (t.assigned(v)) continue;
      DeletionReport del = t.assign(v, row.cells[k].bit);
      PropagationStep step;
      step.var = v;
      step.bit = row.cells[k].bit;
      step.gate = gate;
      step.row = row_id;
      step.deleted_rows = std::move(del.deleted_rows);
      rep.steps.push_back(std::move(step));
      for (uint32_t touched : del.degree_changed) push(touched);
      if (del.contradiction_gate) {
        rep.contradiction_gate = del.contradiction_gate;
        return rep;
      }
    }
  }
  return rep;
}

// --- decisions ------------------------------------------------------------------

DecisionMaker::DecisionMaker(DecisionPolicy policy)
    : policy_(std::move(policy)), rng_(policy_.seed) {}

namespace {

struct Candidate {
  uint32_t gate;
  int degree;
};

// Gates eligible for a decision: degree 2 or 3 with an unassigned input pin;
// degree-4 gates (nothing assigned at all) only when no 2/3 exists.
std::vector<Candidate> eligible_gates(const Tables& t) {
  const Circuit& c = t.circuit();
  std::vector<Candidate> low, fresh;
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    int deg = t.degree(j);
    if (deg < 2) continue;
    const Gate& g = c.gate(j);
    bool open = false;
    for (int k = 0; k < g.arity(); ++k)
      if (!t.assigned(g.in[k])) { open = true; break; }
    if (!open) continue;
    (deg == 4 ? fresh : low).push_back({j, deg});
  }
  return low.empty() ? fresh : low;
}

Var lowest_open_input(const Tables& t, uint32_t gate) {
  const Circuit& c = t.circuit();
  const Gate& g = c.gate(gate);
  Var best{};
  uint32_t best_ord = UINT32_MAX;
  for (int k = 0; k < g.arity(); ++k)
    if (!t.assigned(g.in[k]) && c.var_ord(g.in[k]) < best_ord) {
      best = g.in[k];
      best_ord = c.var_ord(g.in[k]);
    }
  return best;
}

// Bit carried by v in more of the gate's live rows; ties go to 1.
uint8_t majority_bit(const Tables& t, uint32_t gate, Var v) {
  const Circuit& c = t.circuit();
  uint32_t ord = c.var_ord(v);
  int count[2] = {0, 0};
  for (uint32_t id : t.live_rows(gate)) {
    const CttRow& r = t.row(id);
    for (int k = 0; k < r.cell_count; ++k)
      if (r.cells[k].var == ord) ++count[r.cells[k].bit];
  }
  return count[1] >= count[0] ? 1 : 0;
}

uint32_t gate_containing(const Tables& t, Var v) {
  auto occ = t.occurrences(v);
  return occ.empty() ? 0 : t.row(occ.front().row).gate;
}

std::optional<Decision> deterministic_choice(const Tables& t) {
  auto cands = eligible_gates(t);
  if (cands.empty()) return std::nullopt;
  Candidate best = cands.front();
  for (const Candidate& c : cands)
    if (c.degree < best.degree || (c.degree == best.degree && c.gate < best.gate))
      best = c;
  Decision d;
  d.gate = best.gate;
  d.var = lowest_open_input(t, best.gate);
  d.bit = majority_bit(t, best.gate, d.var);
  d.tag = "det";
  return d;
}

}  // namespace

std::optional<Decision> DecisionMaker::choose(const Tables& t) {
  if (policy_.kind == DecisionPolicy::Kind::Scripted &&
      cursor_ < policy_.script.size()) {
    auto [v, bit] = policy_.script[cursor_++];
    if (t.assigned(v)) throw ScriptConflict(v);
    Decision d;
    d.var = v;
    d.bit = bit;
    d.gate = gate_containing(t, v);
    d.tag = "script";
    return d;
  }
  if (policy_.kind == DecisionPolicy::Kind::SeededRandom) {
    auto cands = eligible_gates(t);
    if (cands.empty()) return std::nullopt;
    const Circuit& c = t.circuit();
    Decision d;
    d.gate = cands[rng_() % cands.size()].gate;
    const Gate& g = c.gate(d.gate);
    std::vector<Var> open;
    for (int k = 0; k < g.arity(); ++k)
      if (!t.assigned(g.in[k])) open.push_back(g.in[k]);
    d.var = open[rng_() % open.size()];
    d.bit = uint8_t(rng_() & 1);
    d.tag = "rand";
    return d;
  }
  return deterministic_choice(t);  // Deterministic, or script exhausted
}

// --- solving --------------------------------------------------------------------

Assignment extract_solution(const Tables& t) {
  const Circuit& c = t.circuit();
  Assignment a(c.input_count(), 0);
  for (uint32_t i = 1; i <= c.input_count(); ++i) {
    Var v = Var::input(i);
    if (auto bit = t.value(v)) {
      a.set(v, *bit);
    } else if (t.occurrences(v).empty()) {
      a.set(v, 0);  // declared but feeding nothing
    } else {
      throw UnassignedInput(v);
    }
  }
  return a;
}

namespace {

void emit_deletions(std::vector<TraceEvent>& trace, std::vector<uint32_t> rows) {
  if (!rows.empty()) trace.push_back(TraceEvent::del(std::move(rows)));
}

void emit_propagation(std::vector<TraceEvent>& trace, PropagationReport& rep,
                      SolveStats& stats) {
  for (PropagationStep& s : rep.steps) {
    trace.push_back(TraceEvent::force(s.var, s.bit, s.gate, s.row));
    emit_deletions(trace, std::move(s.deleted_rows));
    ++stats.forces;
  }
  if (rep.contradiction_gate)
    trace.push_back(
        TraceEvent::fail("contradiction G" + std::to_string(*rep.contradiction_gate)));
}

Var lowest_unassigned_input(const Tables& t) {
  const Circuit& c = t.circuit();
  for (uint32_t i = 1; i <= c.input_count(); ++i)
    if (!t.assigned(Var::input(i))) return Var::input(i);
  return Var{};
}

}  // namespace

SolveResult solve(const Circuit& c, const DecisionPolicy& policy,
                  bool run_preprocess) {
  SolveResult res;
  Tables t(c);
  const uint64_t iteration_cap = 5ull * c.gate_count() + c.input_count() + 1;

  if (run_preprocess) {
    PreprocessReport pre = preprocess(t, &res.trace);
    res.marks = pre.marks;
    res.stats.probes = pre.probes;
    if (pre.outcome == PreprocessReport::Outcome::CircuitContradiction) {
      res.outcome.kind = OutcomeKind::Unsat;
      res.stats.net_deletions = t.row_count() - t.live_total();
      return res;
    }
    if (pre.outcome == PreprocessReport::Outcome::CircuitTautology) {
      res.outcome.kind = OutcomeKind::Tautology;
      res.stats.net_deletions = t.row_count() - t.live_total();
      return res;
    }
  }

  DecisionMaker chooser(policy);
  uint64_t decisions_taken = 0;
  auto finish_contradiction = [&](uint32_t /*gate*/) {
    if (decisions_taken == 0) {
      res.outcome.kind = OutcomeKind::Unsat;  // choice-free, hence sound
    } else {
      res.outcome.kind = OutcomeKind::Failure;
      res.outcome.reason = "contradiction after " +
                           std::to_string(decisions_taken) + " decision(s)";
    }
    res.stats.net_deletions = t.row_count() - t.live_total();
  };

  res.trace.push_back(TraceEvent::set(c.output(), 1));
  DeletionReport set_rep = t.assign(c.output(), 1);
  emit_deletions(res.trace, std::move(set_rep.deleted_rows));
  if (set_rep.contradiction_gate) {
    res.trace.push_back(TraceEvent::fail(
        "contradiction G" + std::to_string(*set_rep.contradiction_gate)));
    finish_contradiction(*set_rep.contradiction_gate);
    return res;
  }

  while (t.assigned_input_count() < c.input_count()) {
    ++res.stats.iterations;
    if (res.stats.iterations > iteration_cap)
      throw std::logic_error("solve loop exceeded its termination bound");

    PropagationReport prop = propagate_degree1(t);
    emit_propagation(res.trace, prop, res.stats);
    if (prop.contradiction_gate) {
      finish_contradiction(*prop.contradiction_gate);
      return res;
    }
    if (!prop.steps.empty()) continue;

    if (auto d = chooser.choose(t)) {
      ++decisions_taken;
      ++res.stats.decisions;
      res.trace.push_back(TraceEvent::decide(d->var, d->bit, d->gate, d->tag));
      DeletionReport rep = t.assign(d->var, d->bit);
      emit_deletions(res.trace, std::move(rep.deleted_rows));
      if (rep.contradiction_gate) {
        res.trace.push_back(TraceEvent::fail(
            "contradiction G" + std::to_string(*rep.contradiction_gate)));
        finish_contradiction(*rep.contradiction_gate);
        return res;
      }
      continue;
    }

    // No eligible gate: the remaining inputs touch no live block.
    Var v = lowest_unassigned_input(t);
    ++res.stats.defaults;
    res.trace.push_back(TraceEvent::fallback(v));
    t.assign(v, 0);
  }

  res.stats.net_deletions = t.row_count() - t.live_total();
  Assignment inputs = extract_solution(t);
  if (evaluate(c, inputs) == 1) {
    res.outcome.kind = OutcomeKind::Sat;
    res.outcome.inputs = std::move(inputs);
  } else {
    res.outcome.kind = OutcomeKind::Failure;
    res.outcome.reason = "extracted assignment does not satisfy the circuit";
    res.trace.push_back(TraceEvent::fail(res.outcome.reason));
  }
  return res;
}

}  // namespace csat
