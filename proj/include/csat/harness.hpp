#pragma once

// Differential fuzzing and scaling benchmarks behind the CLI. Fuzz instances
// run in a worker pool; every worker owns its circuit, tables and session,
// and per-instance seeds derive from (seed, index), so reports do not depend
// on scheduling.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csat/circuit.hpp"
#include "csat/generator.hpp"

namespace csat {

struct FuzzConfig {
  CircuitClass cls = CircuitClass::General;
  uint32_t max_inputs = 10;  // per-instance n drawn in [1, max_inputs]
  uint32_t max_gates = 40;   // per-instance m drawn in [1, max_gates]
  uint32_t runs = 1000;
  uint64_t seed = 1;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::string counterexample_dir = "counterexamples";
  bool write_counterexamples = true;
};

// One bucket per run; a run lands in the most severe bucket it triggers.
// `disagreement` — a sound verdict (verified SAT, choice-free UNSAT/TAUT, or
// a preprocessing mark) contradicted by brute force — must stay 0; each such
// run is shrunk and written out.
struct FuzzReport {
  CircuitClass cls = CircuitClass::General;
  uint64_t seed = 0;
  uint64_t runs = 0;
  uint64_t sat_verified_agree = 0;
  uint64_t unsat_agree = 0;
  uint64_t tautology_agree = 0;
  uint64_t failure_but_oracle_sat = 0;
  uint64_t failure_but_oracle_unsat = 0;
  uint64_t disagreement = 0;
  std::vector<std::string> counterexample_paths;
};

FuzzReport run_fuzz(const FuzzConfig& cfg);
std::string fuzz_report_to_text(const FuzzReport& r);

struct BenchRow {
  uint32_t m = 0;
  uint32_t n = 0;
  double time_ms = 0.0;     // median over reps
  uint64_t deletions = 0;   // rows dead when the solve finished (<= 4m)
  uint64_t probes = 0;      // preprocessing probes
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::optional<double> slope;  // log-log fit of time vs m; nullopt if <2 sizes
};

// Times solve() end to end on all-AND chains, `reps` runs per size.
BenchReport run_bench(std::span<const uint32_t> sizes, int reps);
std::string bench_to_csv(const BenchReport& r);

}  // namespace csat
