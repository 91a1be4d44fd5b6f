#pragma once

// Seeded random circuit generation, stratified by structural class. Every
// generated circuit has all gates reachable from the output (each gate output
// except the last is consumed by some higher gate), and the requested class
// is re-checked with classify_structure before returning.

#include <cstdint>
#include <stdexcept>

#include "csat/circuit.hpp"

namespace csat {

enum class CircuitClass : uint8_t { General, Monotone, Tree, NotOnUnbranched };

const char* circuit_class_name(CircuitClass c);
CircuitClass circuit_class_from_name(std::string_view name);  // throws

struct InfeasibleConfig : std::runtime_error {
  explicit InfeasibleConfig(const std::string& why)
      : std::runtime_error("infeasible generator config: " + why) {}
};

struct GenConfig {
  uint32_t inputs = 4;
  uint32_t gates = 8;
  double and_weight = 1.0;
  double or_weight = 1.0;
  double not_weight = 0.5;  // ignored for Monotone; Tree fixes the NOT count
  CircuitClass cls = CircuitClass::General;
  uint64_t seed = 1;
};

Circuit generate(const GenConfig& cfg);

// All-AND chain y1 = AND(x1,x2), yj = AND(y_{j-1}, x_{j+1}); n = m+1.
// Worst case for the preprocessor: probing gate k walks its whole cone.
Circuit make_and_chain(uint32_t m);

}  // namespace csat
