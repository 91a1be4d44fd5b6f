// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; ctest
// fails if any criterion fails. The fuzzing criteria take a few minutes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "csat/engine.hpp"
#include "csat/generator.hpp"
#include "csat/harness.hpp"
#include "csat/oracle.hpp"
#include "csat/preprocess.hpp"

using namespace csat;

namespace {

struct Criterion {
  std::string name;
  bool ok = true;

  explicit Criterion(std::string n) : name(std::move(n)) {}
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      std::printf("       %s: %s\n", name.c_str(), what.c_str());
    }
  }
  ~Criterion() {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
  }
};

std::string fixture_path(const std::string& name) {
  return std::string(CSAT_FIXTURES) + "/" + name;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CSAT_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch_dir(const std::string& leaf) {
  auto p = std::filesystem::temp_directory_path() / "csat_acceptance" / leaf;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("criterion 1: table fidelity against the paper tables") {
  Criterion cr("C1 table fidelity (dump vs. transcribed tables)");
  RunResult fig2 = run_cli("dump " + fixture_path("fig2.bench"));
  cr.expect(fig2.exit_code == 0, "dump fig2 exit code");
  cr.expect(fig2.out == read_fixture("fig2_tables.txt"), "fig2 dump differs");
  RunResult fig6 = run_cli("dump " + fixture_path("fig6.bench"));
  cr.expect(fig6.exit_code == 0, "dump fig6 exit code");
  cr.expect(fig6.out == read_fixture("fig6_tables.txt"), "fig6 dump differs");
  // row counts pinned by the paper: 10 and 18
  Tables t2(parse_circuit(read_fixture("fig2.bench")));
  Tables t6(parse_circuit(read_fixture("fig6.bench")));
  cr.expect(t2.row_count() == 10, "fig2 row count");
  cr.expect(t6.row_count() == 18, "fig6 row count");
  CHECK(cr.ok);
}

TEST_CASE("criterion 2: worked-example trace on figure-2") {
  Criterion cr("C2 worked-example trace (scripted x1=1, x2=0)");
  RunResult r = run_cli("solve " + fixture_path("fig2.bench") +
                        " --decisions x1=1,x2=0 --trace");
  cr.expect(r.exit_code == 10, "exit code 10");
  cr.expect(r.out == "SAT x1=1 x2=0 x3=0\n" +
                         read_fixture("fig2_scripted_trace.txt"),
            "verdict plus trace differ");

  // final live rows are exactly {3,5,10}
  Circuit c = parse_circuit(read_fixture("fig2.bench"));
  SolveResult sr = solve(
      c, DecisionPolicy::scripted({{Var::input(1), 1}, {Var::input(2), 0}}),
      true);
  Tables replay(c);
  for (const TraceEvent& e : sr.trace)
    if (e.type == TraceEvent::Type::Set || e.type == TraceEvent::Type::Force ||
        e.type == TraceEvent::Type::Decide ||
        e.type == TraceEvent::Type::Default)
      replay.assign(e.var, e.bit);
  std::vector<uint32_t> live;
  for (uint32_t id = 1; id <= replay.row_count(); ++id)
    if (replay.row_live(id)) live.push_back(id);
  cr.expect(live == std::vector<uint32_t>{3, 5, 10}, "live rows not {3,5,10}");
  CHECK(cr.ok);
}

TEST_CASE("criterion 3: figure-6 preprocessing") {
  Criterion cr("C3 figure-6 preprocessing marks (G4, y4=0) and forces x1=1");
  Circuit c = parse_circuit(read_fixture("fig6.bench"));
  Tables t(c);
  PreprocessReport rep = preprocess(t);
  cr.expect(rep.marks.size() == 1, "exactly one mark");
  cr.expect(!rep.marks.empty() &&
                rep.marks[0] == Mark{4, 0, MarkKind::Contradiction},
            "mark is (G4, y4=0, contradiction)");

  SolveResult sr = solve(c, DecisionPolicy::deterministic(), true);
  cr.expect(sr.outcome.kind == OutcomeKind::Sat, "figure-6 solves");
  cr.expect(sr.outcome.kind == OutcomeKind::Sat &&
                *sr.outcome.inputs.get(Var::input(1)) == 1,
            "x1 forced to 1");
  bool forced_by_propagation = false;
  for (const TraceEvent& e : sr.trace)
    if (e.type == TraceEvent::Type::Force && e.var == Var::input(1) &&
        e.bit == 1)
      forced_by_propagation = true;
  cr.expect(forced_by_propagation, "x1=1 appears as a FORCE, not a guess");
  CHECK(cr.ok);
}

TEST_CASE("criterion 4: exhaustive degree classification") {
  Criterion cr("C4 degree classification (all partial patterns, degrees 0-4)");
  auto lines_consistent = [](GateKind kind, int a, int b, int out) {
    int nin = gate_arity(kind);
    int count = 0;
    for (int pa = 0; pa < 2; ++pa)
      for (int pb = 0; pb < (nin == 2 ? 2 : 1); ++pb) {
        int po = kind == GateKind::And   ? (pa & pb)
                 : kind == GateKind::Or  ? (pa | pb)
                                         : !pa;
        if (a >= 0 && pa != a) continue;
        if (b >= 0 && nin == 2 && pb != b) continue;
        if (out >= 0 && po != out) continue;
        ++count;
      }
    return count;
  };
  int patterns = 0;
  for (GateKind kind : {GateKind::And, GateKind::Or, GateKind::Not}) {
    int nin = gate_arity(kind);
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= (nin == 2 ? 1 : -1); ++b)
        for (int out = -1; out <= 1; ++out) {
          ++patterns;
          std::vector<Gate> gs(1);
          gs[0].kind = kind;
          gs[0].in[0] = Var::input(1);
          if (nin == 2) gs[0].in[1] = Var::input(2);
          Circuit c(uint32_t(nin), std::move(gs));
          Tables t(c);
          if (a >= 0) t.assign(Var::input(1), uint8_t(a));
          if (b >= 0 && nin == 2) t.assign(Var::input(2), uint8_t(b));
          if (out >= 0) t.assign(Var::gate_out(1), uint8_t(out));
          if (t.degree(1) != lines_consistent(kind, a, b, out)) {
            cr.expect(false, "pattern mismatch (kind " +
                                 std::string(gate_kind_name(kind)) + ")");
          }
        }
  }
  cr.expect(patterns == 27 + 27 + 9, "pattern count 27+27+9");
  CHECK(cr.ok);
}

TEST_CASE("criterion 5: soundness over 10,000 fuzzed circuits") {
  Criterion cr("C5 soundness suite (10,000 circuits, 0 disagreements)");
  auto dir = scratch_dir("c5");
  uint64_t total = 0;
  for (CircuitClass cls :
       {CircuitClass::General, CircuitClass::Monotone, CircuitClass::Tree,
        CircuitClass::NotOnUnbranched}) {
    FuzzConfig cfg;
    cfg.cls = cls;
    cfg.max_inputs = 10;
    cfg.max_gates = 40;
    cfg.runs = 2500;
    cfg.seed = 20240501;
    cfg.counterexample_dir = (dir / circuit_class_name(cls)).string();
    FuzzReport rep = run_fuzz(cfg);
    total += rep.runs;
    cr.expect(rep.disagreement == 0,
              std::string("disagreements on class ") + circuit_class_name(cls));
    uint64_t sum = rep.sat_verified_agree + rep.unsat_agree +
                   rep.tautology_agree + rep.failure_but_oracle_sat +
                   rep.failure_but_oracle_unsat + rep.disagreement;
    cr.expect(sum == rep.runs, "bucket counts sum to runs");
  }
  cr.expect(total == 10000, "10,000 circuits fuzzed");
  CHECK(cr.ok);
}

TEST_CASE("criterion 6: the restricted-class claim, measured") {
  Criterion cr("C6 claim measurement on monotone and tree classes");
  for (CircuitClass cls : {CircuitClass::Monotone, CircuitClass::Tree}) {
    auto dir = scratch_dir(std::string("c6_") + circuit_class_name(cls));
    FuzzConfig cfg;
    cfg.cls = cls;
    cfg.max_inputs = 10;
    cfg.max_gates = 40;
    cfg.runs = 1000;
    cfg.seed = 777;
    cfg.counterexample_dir = dir.string();
    FuzzReport rep = run_fuzz(cfg);
    cr.expect(rep.disagreement == 0, "soundness holds on the class");
    double rate = double(rep.failure_but_oracle_sat) / double(rep.runs);
    std::printf("       %s: failure-but-oracle-SAT rate %.4f (%llu/%llu)\n",
                circuit_class_name(cls), rate,
                (unsigned long long)rep.failure_but_oracle_sat,
                (unsigned long long)rep.runs);
    if (rep.failure_but_oracle_sat > 0) {
      // claim falsified: acceptable, but the evidence must exist and reproduce
      cr.expect(!rep.counterexample_paths.empty(),
                "claim-falsifying run produced no counterexample file");
      for (const std::string& path : rep.counterexample_paths) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        Circuit cex = parse_circuit(ss.str());
        StructureClass sc = classify_structure(cex);
        cr.expect(cls == CircuitClass::Monotone ? sc.monotone : sc.tree,
                  "counterexample left its class");
        cr.expect(brute_force(cex).sat_count > 0,
                  "counterexample stays satisfiable");
        // the recorded failure was policy-dependent; a genuine counterexample
        // fails under the deterministic policy or some nearby seed
        bool failing =
            solve(cex, DecisionPolicy::deterministic(), true).outcome.kind ==
            OutcomeKind::Failure;
        for (uint64_t s = 0; !failing && s < 200; ++s)
          failing = solve(cex, DecisionPolicy::seeded(s), true).outcome.kind ==
                    OutcomeKind::Failure;
        cr.expect(failing, "counterexample did not fail under 201 policies");
      }
    }
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 7: mark soundness on fuzzed circuits") {
  Criterion cr("C7 every preprocessing mark is a brute-force constant");
  std::mt19937_64 rng(4242);
  uint64_t marks_checked = 0, violations = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    GenConfig cfg;
    cfg.inputs = 1 + uint32_t(rng() % 10);
    cfg.gates = 1 + uint32_t(rng() % 40);
    cfg.not_weight = 1.2;
    cfg.seed = rng();
    Circuit c = generate(cfg);
    Tables t(c);
    PreprocessReport rep = preprocess(t);
    for (const Mark& m : rep.marks) {
      ++marks_checked;
      OracleVerdict cone = brute_force_cone(c, m.gate);
      bool sound = m.fixed_bit == 0
                       ? cone.classification == OracleVerdict::Class::Contradiction
                       : cone.classification == OracleVerdict::Class::Tautology;
      if (!sound) ++violations;
    }
  }
  std::printf("       marks checked: %llu\n", (unsigned long long)marks_checked);
  cr.expect(marks_checked > 0, "fuzzing produced marks to check");
  cr.expect(violations == 0, "mark contradicted by brute_force_cone");
  CHECK(cr.ok);
}

TEST_CASE("criterion 8: size bounds and O(m^2) scaling") {
  Criterion cr("C8 table dimensions and chain-solve scaling");
  // dimension check over random circuits
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 300; ++iter) {
    GenConfig cfg;
    cfg.inputs = 1 + uint32_t(rng() % 10);
    cfg.gates = 1 + uint32_t(rng() % 40);
    cfg.seed = rng();
    Circuit c = generate(cfg);
    Tables t(c);
    uint32_t expect = 0;
    for (const Gate& g : c.gates()) expect += g.arity() == 2 ? 4 : 2;
    if (t.row_count() != expect || t.row_count() > 4 * c.gate_count() ||
        c.var_count() != c.input_count() + c.gate_count())
      cr.expect(false, "table dimension bound violated");
  }

  const uint32_t sizes[] = {100, 1000, 10000};
  BenchReport rep = run_bench(sizes, 5);
  REQUIRE(rep.rows.size() == 3);
  for (const BenchRow& row : rep.rows) {
    cr.expect(row.deletions <= 4ull * row.m, "net deletions exceed 4m");
    cr.expect(row.probes <= row.m, "more probes than gates");
  }
  cr.expect(rep.slope.has_value(), "slope computed");
  if (rep.slope) {
    std::printf("       log-log slope: %.3f\n", *rep.slope);
    cr.expect(*rep.slope <= 2.5, "slope exceeds 2.5");
  }
  std::printf("       m=10000 median solve: %.1f ms\n", rep.rows[2].time_ms);
  cr.expect(rep.rows[2].time_ms < 10000.0, "m=10^4 solve took >= 10 s");
  CHECK(cr.ok);
}

TEST_CASE("criterion 9: snapshot exactness over 1,000 probe/restore cycles") {
  Criterion cr("C9 1,000 random probe/restore cycles leave dumps byte-identical");
  std::mt19937_64 rng(2718);
  int cycles = 0;
  while (cycles < 1000) {
    GenConfig cfg;
    cfg.inputs = 1 + uint32_t(rng() % 8);
    cfg.gates = 1 + uint32_t(rng() % 30);
    cfg.not_weight = 1.0;
    cfg.seed = rng();
    Circuit c = generate(cfg);
    Tables t(c);
    // constrain some tables first so probes start from varied states
    if (rng() & 1) t.assign(c.output(), 1);
    std::string before = t.dump();
    for (int k = 0; k < 10 && cycles < 1000; ++k, ++cycles) {
      uint32_t gate = 1 + uint32_t(rng() % c.gate_count());
      if (t.assigned(Var::gate_out(gate))) continue;
      TablesSnapshot snap = t.snapshot();
      probe_gate(t, gate, uint8_t(rng() & 1));
      t.restore(snap);
      if (t.dump() != before) {
        cr.expect(false, "dump changed after restore");
        break;
      }
    }
  }
  CHECK(cr.ok);
}
