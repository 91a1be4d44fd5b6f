#pragma once

// Greedy counterexample minimisation: repeatedly tries to bypass a gate with
// one of its operands (pruning whatever comes loose) while the failure
// predicate keeps holding. Deterministic, so a fixpoint is also idempotent.

#include <functional>

#include "csat/circuit.hpp"

namespace csat {

using CircuitPredicate = std::function<bool(const Circuit&)>;

// Smallest circuit reachable by single reductions that still satisfies
// `predicate`. Expects predicate(c) to hold on entry.
Circuit shrink(const Circuit& c, const CircuitPredicate& predicate);

}  // namespace csat
