#pragma once

// Recursive constant-subcircuit detection.
//
// Walks AND/OR gates depth-first from the output (NOT gates are stepped
// through to their driver), children before parents, each gate once. At each
// gate whose output is still free, one polarity is probed under a snapshot:
// an AND gate is hypothesised to 1, an OR gate to 0, and only choice-free
// degree-1 propagation runs. If the probe bottoms out in a degree-0 block the
// opposite value is a sound constant: the tables are restored, y_k is fixed
// permanently and propagated. Probes that stay consistent leave no trace.
//
// Only one polarity per gate is probed, so constant subcircuits of the other
// polarity can be missed; the fuzz harness measures that.

#include <cstdint>
#include <string>
#include <vector>

#include "csat/circuit.hpp"
#include "csat/engine.hpp"
#include "csat/tables.hpp"

namespace csat {

struct PreprocessReport {
  enum class Outcome { Open, CircuitTautology, CircuitContradiction };
  std::vector<Mark> marks;
  std::vector<uint32_t> tested;  // AND/OR gates visited, post-order
  uint64_t probes = 0;           // probes actually run (fixed gates skip)
  Outcome outcome = Outcome::Open;
};

enum class ProbeResult : uint8_t { Consistent, Contradiction };

// Assigns y_gate := hypothesis and runs degree-1 propagation. The caller owns
// the snapshot/restore bracket; the table is left mutated.
ProbeResult probe_gate(Tables& t, uint32_t gate, uint8_t hypothesis);

// trace, when given, receives MARK plus the SET/DEL/FORCE events of each
// permanent fix. Probe-internal events are never recorded.
PreprocessReport preprocess(Tables& t, std::vector<TraceEvent>* trace = nullptr);

// "mark G4 y4=0 contradiction" per mark, then "outcome <open|tautology|contradiction>".
std::string report_to_text(const PreprocessReport& r);

}  // namespace csat
