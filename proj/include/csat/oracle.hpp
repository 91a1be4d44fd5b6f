#pragma once

// Exhaustive ground truth. Everything here is a pure function of an
// immutable circuit and safe to run in parallel across instances.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "csat/circuit.hpp"

namespace csat {

struct OracleLimit : std::runtime_error {
  explicit OracleLimit(uint32_t n)
      : std::runtime_error("refusing exhaustive enumeration over " +
                           std::to_string(n) + " inputs (cap is 24)") {}
};

struct OracleVerdict {
  enum class Class { Contradiction, Tautology, Mixed };
  uint64_t sat_count = 0;
  uint32_t enumerated_inputs = 0;  // sat_count is out of 2^this
  Class classification = Class::Contradiction;
  std::optional<std::vector<uint8_t>> witness;  // one satisfying input vector

  uint64_t total() const { return 1ull << enumerated_inputs; }
};

// Exact model count of the whole circuit over all 2^n input assignments.
// Guard rail: n <= 24.
OracleVerdict brute_force(const Circuit& c);

// Model count of y_gate = 1 over the inputs feeding that gate's cone.
// The witness covers the cone's inputs in ascending index order.
OracleVerdict brute_force_cone(const Circuit& c, uint32_t gate);

}  // namespace csat
