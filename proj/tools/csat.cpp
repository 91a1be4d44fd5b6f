// csat — truth-table driven Circuit-SAT heuristic with a brute-force oracle.
//
// Exit codes: 10 SAT, 20 UNSAT, 30 tautology, 40 heuristic failure,
// 1 usage/parse error, 2 fuzzing found a soundness disagreement.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "csat/engine.hpp"
#include "csat/harness.hpp"
#include "csat/oracle.hpp"
#include "csat/preprocess.hpp"
#include "csat/tables.hpp"

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitTaut = 30;
constexpr int kExitFail = 40;
constexpr int kExitUsage = 1;
constexpr int kExitDisagreement = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

csat::Circuit load_circuit(const std::string& path) {
  csat::Circuit c = csat::parse_circuit(read_file(path));
  for (uint32_t j : csat::unreachable_gates(c))
    std::cerr << "warning: gate y" << j << " is unreachable from the output\n";
  return c;
}

csat::Var parse_var_name(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
    throw std::runtime_error("bad variable name '" + name + "' (want x<i>/y<j>)");
  uint32_t idx = uint32_t(std::stoul(name.substr(1)));
  return name[0] == 'x' ? csat::Var::input(idx) : csat::Var::gate_out(idx);
}

// "x1=1,x2=0" -> scripted decision list
std::vector<std::pair<csat::Var, uint8_t>> parse_script(const std::string& s) {
  std::vector<std::pair<csat::Var, uint8_t>> script;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq + 2 != item.size() ||
        (item[eq + 1] != '0' && item[eq + 1] != '1'))
      throw std::runtime_error("bad decision '" + item + "' (want var=0|1)");
    script.emplace_back(parse_var_name(item.substr(0, eq)),
                        uint8_t(item[eq + 1] - '0'));
  }
  return script;
}

uint64_t default_seed() {
  if (const char* env = std::getenv("CSAT_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

int outcome_exit(csat::OutcomeKind k) {
  switch (k) {
    case csat::OutcomeKind::Sat: return kExitSat;
    case csat::OutcomeKind::Unsat: return kExitUnsat;
    case csat::OutcomeKind::Tautology: return kExitTaut;
    case csat::OutcomeKind::Failure: return kExitFail;
  }
  return kExitFail;
}

void print_verdict(const csat::Circuit& c, const csat::SolveResult& r) {
  switch (r.outcome.kind) {
    case csat::OutcomeKind::Sat: {
      std::cout << "SAT";
      for (uint32_t i = 1; i <= c.input_count(); ++i)
        std::cout << " x" << i << '='
                  << int(*r.outcome.inputs.get(csat::Var::input(i)));
      std::cout << '\n';
      break;
    }
    case csat::OutcomeKind::Unsat: std::cout << "UNSAT\n"; break;
    case csat::OutcomeKind::Tautology: std::cout << "TAUT\n"; break;
    case csat::OutcomeKind::Failure:
      std::cout << "FAIL " << r.outcome.reason << '\n';
      break;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truth-table driven Circuit-SAT heuristic"};
  app.require_subcommand(1);

  // solve
  std::string solve_path, decisions;
  uint64_t solve_seed = 0;
  bool with_trace = false, no_preprocess = false, seed_given = false;
  auto* cmd_solve = app.add_subcommand("solve", "solve a netlist");
  cmd_solve->add_option("path", solve_path, "netlist file")->required();
  cmd_solve->add_flag("--trace", with_trace, "append the event trace");
  cmd_solve->add_option("--decisions", decisions, "scripted decisions, e.g. x1=1,x2=0");
  cmd_solve->add_option("--seed", solve_seed, "random decision policy with this seed");
  cmd_solve->add_flag("--no-preprocess", no_preprocess, "skip constant-subcircuit detection");

  // classify
  std::string classify_path;
  auto* cmd_classify = app.add_subcommand("classify", "structural class flags");
  cmd_classify->add_option("path", classify_path)->required();

  // dump
  std::string dump_path;
  auto* cmd_dump = app.add_subcommand("dump", "print the freshly built tables");
  cmd_dump->add_option("path", dump_path)->required();

  // oracle
  std::string oracle_path;
  auto* cmd_oracle = app.add_subcommand("oracle", "exhaustive model count (n <= 24)");
  cmd_oracle->add_option("path", oracle_path)->required();

  // fuzz
  csat::FuzzConfig fuzz;
  std::string fuzz_class = "general";
  uint64_t fuzz_seed = default_seed();
  auto* cmd_fuzz = app.add_subcommand("fuzz", "differential fuzzing vs. brute force");
  cmd_fuzz->add_option("--class", fuzz_class, "general|monotone|tree|not_on_unbranched");
  cmd_fuzz->add_option("--n", fuzz.max_inputs, "max inputs per instance");
  cmd_fuzz->add_option("--m", fuzz.max_gates, "max gates per instance");
  cmd_fuzz->add_option("--runs", fuzz.runs, "instances");
  cmd_fuzz->add_option("--seed", fuzz_seed, "base seed (default $CSAT_SEED or 1)");
  cmd_fuzz->add_option("--jobs", fuzz.jobs, "worker threads (0 = hardware)");
  cmd_fuzz->add_option("--counterexample-dir", fuzz.counterexample_dir);

  // bench
  std::vector<uint32_t> bench_sizes{100, 1000, 10000};
  int bench_reps = 5;
  auto* cmd_bench = app.add_subcommand("bench", "chain-circuit scaling benchmark");
  cmd_bench->add_option("--sizes", bench_sizes, "gate counts, ascending");
  cmd_bench->add_option("--reps", bench_reps, "repetitions per size");

  CLI11_PARSE(app, argc, argv);
  seed_given = cmd_solve->count("--seed") > 0;

  try {
    if (*cmd_solve) {
      csat::Circuit c = load_circuit(solve_path);
      csat::DecisionPolicy policy = csat::DecisionPolicy::deterministic();
      if (!decisions.empty())
        policy = csat::DecisionPolicy::scripted(parse_script(decisions));
      else if (seed_given)
        policy = csat::DecisionPolicy::seeded(solve_seed);
      csat::SolveResult r = csat::solve(c, policy, !no_preprocess);
      print_verdict(c, r);
      if (with_trace) std::cout << csat::trace_to_text(r.trace);
      return outcome_exit(r.outcome.kind);
    }

    if (*cmd_classify) {
      csat::StructureClass sc = csat::classify_structure(load_circuit(classify_path));
      std::cout << "monotone=" << (sc.monotone ? "true" : "false")
                << " tree=" << (sc.tree ? "true" : "false")
                << " not_on_unbranched_wires="
                << (sc.not_on_unbranched_wires ? "true" : "false") << '\n';
      return 0;
    }

    if (*cmd_dump) {
      csat::Circuit c = load_circuit(dump_path);
      std::cout << csat::Tables(c).dump();
      return 0;
    }

    if (*cmd_oracle) {
      csat::Circuit c = load_circuit(oracle_path);
      csat::OracleVerdict v = csat::brute_force(c);
      std::cout << "MODELS " << v.sat_count << '/' << v.total() << '\n';
      switch (v.classification) {
        case csat::OracleVerdict::Class::Contradiction:
          std::cout << "CLASS contradiction\n";
          break;
        case csat::OracleVerdict::Class::Tautology:
          std::cout << "CLASS tautology\n";
          break;
        case csat::OracleVerdict::Class::Mixed:
          std::cout << "CLASS mixed\n";
          break;
      }
      if (v.witness) {
        std::cout << "WITNESS";
        for (uint32_t i = 0; i < v.enumerated_inputs; ++i)
          std::cout << " x" << i + 1 << '=' << int((*v.witness)[i]);
        std::cout << '\n';
      }
      if (v.classification == csat::OracleVerdict::Class::Contradiction)
        return kExitUnsat;
      return v.classification == csat::OracleVerdict::Class::Tautology ? kExitTaut
                                                                       : kExitSat;
    }

    if (*cmd_fuzz) {
      fuzz.cls = csat::circuit_class_from_name(fuzz_class);
      fuzz.seed = fuzz_seed;
      csat::FuzzReport rep = csat::run_fuzz(fuzz);
      std::cout << csat::fuzz_report_to_text(rep);
      return rep.disagreement == 0 ? 0 : kExitDisagreement;
    }

    if (*cmd_bench) {
      csat::BenchReport rep = csat::run_bench(bench_sizes, bench_reps);
      std::cout << csat::bench_to_csv(rep);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
