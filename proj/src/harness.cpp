#include "csat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <thread>

#include "csat/engine.hpp"
#include "csat/oracle.hpp"
#include "csat/preprocess.hpp"
#include "csat/shrink.hpp"

namespace csat {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct SizeDraw {
  uint32_t n;
  uint32_t m;
};

SizeDraw draw_sizes(const FuzzConfig& cfg, uint64_t s) {
  uint32_t n = 1 + uint32_t(splitmix64(s ^ 0x11) % cfg.max_inputs);
  uint32_t m = 1 + uint32_t(splitmix64(s ^ 0x22) % cfg.max_gates);
  if (cfg.cls == CircuitClass::Monotone && n < 2) n = 2;
  if (cfg.cls == CircuitClass::Tree) {
    // a tree needs m >= n-1 binary gates
    if (n > cfg.max_gates + 1) n = cfg.max_gates + 1;
    if (m < n - 1) m = n - 1;
    if (m < 1) m = 1;
  }
  return {n, m};
}

Circuit generate_instance(const FuzzConfig& cfg, uint64_t s) {
  for (uint64_t attempt = 0;; ++attempt) {
    SizeDraw sz = draw_sizes(cfg, s + attempt * 0x5151);
    GenConfig gc;
    gc.inputs = sz.n;
    gc.gates = sz.m;
    gc.cls = cfg.cls;
    gc.seed = splitmix64(s + attempt);
    try {
      return generate(gc);
    } catch (const InfeasibleConfig&) {
      if (attempt > 500) throw;
    }
  }
}

bool verdict_unsound(const Circuit& c, const SolveResult& r,
                     const OracleVerdict& truth) {
  switch (r.outcome.kind) {
    case OutcomeKind::Sat:
      return evaluate(c, r.outcome.inputs) != 1 || truth.sat_count == 0;
    case OutcomeKind::Unsat:
      return truth.sat_count != 0;
    case OutcomeKind::Tautology:
      return truth.classification != OracleVerdict::Class::Tautology;
    case OutcomeKind::Failure:
      return false;  // legitimate heuristic outcome
  }
  return false;
}

bool mark_unsound(const Circuit& c, const Mark& m) {
  OracleVerdict cone = brute_force_cone(c, m.gate);
  return m.fixed_bit == 0
             ? cone.classification != OracleVerdict::Class::Contradiction
             : cone.classification != OracleVerdict::Class::Tautology;
}

bool any_unsoundness(const Circuit& c, uint64_t rnd_seed) {
  OracleVerdict truth = brute_force(c);
  SolveResult det = solve(c, DecisionPolicy::deterministic(), true);
  SolveResult rnd = solve(c, DecisionPolicy::seeded(rnd_seed), true);
  if (verdict_unsound(c, det, truth) || verdict_unsound(c, rnd, truth))
    return true;
  return std::any_of(det.marks.begin(), det.marks.end(),
                     [&](const Mark& m) { return mark_unsound(c, m); });
}

bool in_class(const Circuit& c, CircuitClass cls) {
  StructureClass sc = classify_structure(c);
  switch (cls) {
    case CircuitClass::General: return true;
    case CircuitClass::Monotone: return sc.monotone;
    case CircuitClass::Tree: return sc.tree;
    case CircuitClass::NotOnUnbranched: return sc.not_on_unbranched_wires;
  }
  return true;
}

// A satisfiable in-class circuit the heuristic fails on: falsifies the
// no-constant-subcircuits claim for that class.
bool claim_falsified(const Circuit& c, CircuitClass cls, uint64_t rnd_seed) {
  if (!in_class(c, cls)) return false;
  OracleVerdict truth = brute_force(c);
  if (truth.sat_count == 0) return false;
  SolveResult det = solve(c, DecisionPolicy::deterministic(), true);
  SolveResult rnd = solve(c, DecisionPolicy::seeded(rnd_seed), true);
  return det.outcome.kind == OutcomeKind::Failure ||
         rnd.outcome.kind == OutcomeKind::Failure;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct InstanceResult {
  uint64_t bucket = 0;  // index into FuzzReport counters
  std::string counterexample_path;
};

enum Bucket : uint64_t {
  kSatAgree,
  kUnsatAgree,
  kTautAgree,
  kFailOracleSat,
  kFailOracleUnsat,
  kDisagreement,
};

std::string write_counterexample(const FuzzConfig& cfg, const Circuit& minimal) {
  std::string text = serialize_circuit(minimal);
  std::filesystem::create_directories(cfg.counterexample_dir);
  char name[32];
  snprintf(name, sizeof name, "%016llx", (unsigned long long)fnv1a(text));
  std::string path = (std::filesystem::path(cfg.counterexample_dir) /
                      (std::string(name) + ".bench"))
                         .string();
  std::ofstream(path) << text;
  return path;
}

InstanceResult run_instance(const FuzzConfig& cfg, uint64_t index) {
  uint64_t s = splitmix64(cfg.seed ^ (index * 0x9e3779b97f4a7c15ull + 1));
  Circuit c = generate_instance(cfg, s);
  uint64_t rnd_seed = splitmix64(s ^ 0xabcdef);

  OracleVerdict truth = brute_force(c);
  SolveResult det = solve(c, DecisionPolicy::deterministic(), true);
  SolveResult rnd = solve(c, DecisionPolicy::seeded(rnd_seed), true);

  bool unsound = verdict_unsound(c, det, truth) || verdict_unsound(c, rnd, truth);
  for (const Mark& m : det.marks)
    if (!unsound && mark_unsound(c, m)) unsound = true;

  InstanceResult out;
  if (unsound) {
    out.bucket = kDisagreement;
    if (cfg.write_counterexamples) {
      auto predicate = [&](const Circuit& cand) {
        return any_unsoundness(cand, rnd_seed);
      };
      std::string path = write_counterexample(cfg, shrink(c, predicate));
      // the written file must reproduce the disagreement on its own
      std::ifstream in(path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      if (!any_unsoundness(parse_circuit(text), rnd_seed))
        throw std::logic_error("counterexample does not reproduce after round-trip");
      out.counterexample_path = path;
    }
    return out;
  }

  if (det.outcome.kind == OutcomeKind::Failure ||
      rnd.outcome.kind == OutcomeKind::Failure) {
    out.bucket = truth.sat_count > 0 ? kFailOracleSat : kFailOracleUnsat;
    // On the restricted classes a failed satisfiable instance falsifies the
    // no-constant-subcircuits claim; keep the evidence.
    if (out.bucket == kFailOracleSat && cfg.cls != CircuitClass::General &&
        cfg.write_counterexamples) {
      auto predicate = [&](const Circuit& cand) {
        return claim_falsified(cand, cfg.cls, rnd_seed);
      };
      std::string path = write_counterexample(cfg, shrink(c, predicate));
      std::ifstream in(path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      if (!claim_falsified(parse_circuit(text), cfg.cls, rnd_seed))
        throw std::logic_error("counterexample does not reproduce after round-trip");
      out.counterexample_path = path;
    }
    return out;
  }
  switch (det.outcome.kind) {
    case OutcomeKind::Sat: out.bucket = kSatAgree; break;
    case OutcomeKind::Unsat: out.bucket = kUnsatAgree; break;
    case OutcomeKind::Tautology: out.bucket = kTautAgree; break;
    default: out.bucket = kDisagreement; break;
  }
  return out;
}

}  // namespace

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  FuzzReport rep;
  rep.cls = cfg.cls;
  rep.seed = cfg.seed;
  rep.runs = cfg.runs;

  std::vector<InstanceResult> results(cfg.runs);
  unsigned jobs = cfg.jobs ? cfg.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, std::max<uint32_t>(cfg.runs, 1));

  std::atomic<uint32_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      uint32_t i = next.fetch_add(1);
      if (i >= cfg.runs || failed.load()) return;
      try {
        results[i] = run_instance(cfg, i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) first_error = e.what();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("fuzz worker failed: " + first_error);

  for (const InstanceResult& r : results) {
    switch (r.bucket) {
      case kSatAgree: ++rep.sat_verified_agree; break;
      case kUnsatAgree: ++rep.unsat_agree; break;
      case kTautAgree: ++rep.tautology_agree; break;
      case kFailOracleSat: ++rep.failure_but_oracle_sat; break;
      case kFailOracleUnsat: ++rep.failure_but_oracle_unsat; break;
      case kDisagreement: ++rep.disagreement; break;
    }
    if (!r.counterexample_path.empty())
      rep.counterexample_paths.push_back(r.counterexample_path);
  }
  return rep;
}

std::string fuzz_report_to_text(const FuzzReport& r) {
  std::ostringstream os;
  os << "FUZZ class=" << circuit_class_name(r.cls) << " runs=" << r.runs
     << " seed=" << r.seed << '\n'
     << "sat_verified_agree " << r.sat_verified_agree << '\n'
     << "unsat_agree " << r.unsat_agree << '\n'
     << "tautology_agree " << r.tautology_agree << '\n'
     << "failure_but_oracle_sat " << r.failure_but_oracle_sat << '\n'
     << "failure_but_oracle_unsat " << r.failure_but_oracle_unsat << '\n'
     << "disagreement " << r.disagreement << '\n';
  for (const std::string& p : r.counterexample_paths)
    os << "counterexample " << p << '\n';
  return os.str();
}

BenchReport run_bench(std::span<const uint32_t> sizes, int reps) {
  BenchReport rep;
  if (reps < 1) reps = 1;
  for (uint32_t m : sizes) {
    Circuit c = make_and_chain(m);
    std::vector<double> times;
    BenchRow row;
    row.m = m;
    row.n = c.input_count();
    for (int r = 0; r < reps; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(c, DecisionPolicy::deterministic(), true);
      auto t1 = std::chrono::steady_clock::now();
      if (res.outcome.kind != OutcomeKind::Sat)
        throw std::logic_error("chain circuit did not solve");
      times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      row.deletions = res.stats.net_deletions;
      row.probes = res.stats.probes;
    }
    std::sort(times.begin(), times.end());
    row.time_ms = times[times.size() / 2];
    rep.rows.push_back(row);
  }

  if (rep.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const BenchRow& r : rep.rows) {
      double x = std::log(double(r.m));
      double y = std::log(std::max(r.time_ms, 1e-3));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double k = double(rep.rows.size());
    rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return rep;
}

std::string bench_to_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "m,n,time_ms,deletions,probes\n";
  for (const BenchRow& row : r.rows)
    os << row.m << ',' << row.n << ',' << row.time_ms << ',' << row.deletions
       << ',' << row.probes << '\n';
  os << "# slope ";
  if (r.slope) os << *r.slope;
  else os << "n/a";
  os << '\n';
  return os.str();
}

}  // namespace csat
