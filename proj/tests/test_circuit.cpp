#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "csat/circuit.hpp"
#include "csat/generator.hpp"

using namespace csat;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(CSAT_FIXTURES) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Straightforward recursive interpreter, independent of evaluate().
uint8_t eval_recursive(const Circuit& c, const std::vector<uint8_t>& inputs, Var v) {
  if (v.is_input()) return inputs[v.index - 1];
  const Gate& g = c.gate(v.index);
  uint8_t a = eval_recursive(c, inputs, g.in[0]);
  switch (g.kind) {
    case GateKind::And: return a & eval_recursive(c, inputs, g.in[1]);
    case GateKind::Or: return a | eval_recursive(c, inputs, g.in[1]);
    case GateKind::Not: return !a;
  }
  return 0;
}

Assignment input_assignment(const Circuit& c, const std::vector<uint8_t>& bits) {
  Assignment a(c.input_count(), c.gate_count());
  for (uint32_t i = 1; i <= c.input_count(); ++i) a.set(Var::input(i), bits[i - 1]);
  return a;
}

}  // namespace

TEST_CASE("parse figure-2 netlist") {
  Circuit c = parse_circuit(read_fixture("fig2.bench"));
  CHECK(c.input_count() == 3);
  CHECK(c.gate_count() == 3);
  CHECK(c.gate(1).kind == GateKind::Or);
  CHECK(c.gate(1).in[0] == Var::input(1));
  CHECK(c.gate(1).in[1] == Var::input(2));
  CHECK(c.gate(2).kind == GateKind::Not);
  CHECK(c.gate(2).in[0] == Var::input(3));
  CHECK(c.gate(3).kind == GateKind::And);
  CHECK(c.gate(3).in[0] == Var::gate_out(1));
  CHECK(c.gate(3).in[1] == Var::gate_out(2));
  CHECK(c.output() == Var::gate_out(3));
}

TEST_CASE("parse figure-6 netlist") {
  Circuit c = parse_circuit(read_fixture("fig6.bench"));
  CHECK(c.input_count() == 4);
  CHECK(c.gate_count() == 5);
  CHECK(c.gate(5).kind == GateKind::Or);
  CHECK(c.output() == Var::gate_out(5));
}

TEST_CASE("smallest legal circuit") {
  Circuit c = parse_circuit("INPUT(a)\no = NOT(a)\nOUTPUT(o)\n");
  CHECK(c.input_count() == 1);
  CHECK(c.gate_count() == 1);
  CHECK(c.gate(1).kind == GateKind::Not);
}

TEST_CASE("definitions in any order are relabeled topologically") {
  Circuit c = parse_circuit(
      "OUTPUT(top)\n"
      "top = AND(mid, b)\n"
      "mid = OR(a, b)\n"
      "INPUT(a)\n"
      "INPUT(b)\n");
  CHECK(c.gate_count() == 2);
  CHECK(c.gate(1).kind == GateKind::Or);   // mid before top
  CHECK(c.gate(2).kind == GateKind::And);
  for (uint32_t j = 1; j <= c.gate_count(); ++j)
    for (int k = 0; k < c.gate(j).arity(); ++k)
      if (!c.gate(j).in[k].is_input()) CHECK(c.gate(j).in[k].index < j);
}

TEST_CASE("parse errors carry a position") {
  auto expect_error = [](const char* text, const char* needle) {
    try {
      parse_circuit(text);
      FAIL_CHECK("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("INPUT(a)\no = NOT(a\nOUTPUT(o)\n", "expected ')'");
  expect_error("INPUT(a)\no = NOT(a, a)\nOUTPUT(o)\n", "takes 1");
  expect_error("INPUT(a)\nINPUT(b)\no = NOT(a, b)\nOUTPUT(o)\n", "operand");
  expect_error("INPUT(a)\no = AND(a, q)\nOUTPUT(o)\n", "undefined identifier");
  expect_error("INPUT(a)\no = NOT(a)\n", "missing OUTPUT");
  expect_error("INPUT(a)\no = NOT(a)\np = NOT(o)\nOUTPUT(o)\nOUTPUT(p)\n",
               "multiple OUTPUT");
  expect_error("INPUT(a)\no = NOT(a)\nOUTPUT(a)\n", "must name a gate");
  expect_error("INPUT(a)\no = AND(a, p)\np = NOT(o)\nOUTPUT(p)\n",
               "output wire");
  expect_error("INPUT(a)\nu = OR(a, v)\nv = OR(a, u)\no = AND(u, v)\nOUTPUT(o)\n",
               "cycle");
  expect_error("INPUT(a)\nINPUT(a)\no = NOT(a)\nOUTPUT(o)\n", "defined twice");
  expect_error("INPUT(a)\no = XOR(a, a)\nOUTPUT(o)\n", "unknown operator");
  expect_error("INPUT(a)\no = AND(a, a)\nOUTPUT(o)\n", "distinct");
}

TEST_CASE("line numbers in parse errors") {
  try {
    parse_circuit("INPUT(a)\n\no = NOT(\nOUTPUT(o)\n");
    FAIL_CHECK("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("serialize: canonical figure-2 netlist has 7 lines and round-trips") {
  Circuit c = parse_circuit(read_fixture("fig2.bench"));
  std::string text = serialize_circuit(c);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(parse_circuit(text) == c);

  Circuit c6 = parse_circuit(read_fixture("fig6.bench"));
  CHECK(parse_circuit(serialize_circuit(c6)) == c6);

  Circuit single = parse_circuit("INPUT(a)\no = NOT(a)\nOUTPUT(o)\n");
  std::string single_text = serialize_circuit(single);
  CHECK(std::count(single_text.begin(), single_text.end(), '\n') == 3);
}

TEST_CASE("round-trip property over generated circuits") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    GenConfig cfg;
    cfg.inputs = 1 + seed % 6;
    cfg.gates = 1 + seed % 17;
    cfg.cls = CircuitClass::General;
    cfg.seed = seed;
    Circuit c = generate(cfg);
    std::string text = serialize_circuit(c);
    Circuit back = parse_circuit(text);
    CHECK(back == c);
    CHECK(serialize_circuit(back) == text);
  }
}

TEST_CASE("evaluate figure-2") {
  Circuit c = parse_circuit(read_fixture("fig2.bench"));
  CHECK(evaluate(c, input_assignment(c, {1, 0, 0})) == 1);
  CHECK(evaluate(c, input_assignment(c, {0, 0, 0})) == 0);
  // all 8 assignments against (x1|x2) & !x3
  for (int p = 0; p < 8; ++p) {
    std::vector<uint8_t> bits{uint8_t(p & 1), uint8_t((p >> 1) & 1),
                              uint8_t((p >> 2) & 1)};
    uint8_t want = uint8_t((bits[0] | bits[1]) & !bits[2]);
    CHECK(evaluate(c, input_assignment(c, bits)) == want);
  }
  EvalResult full = evaluate_full(c, input_assignment(c, {1, 0, 0}));
  CHECK(full.wires == std::vector<uint8_t>{1, 1, 1});
}

TEST_CASE("figure-6 output is 0 whenever x1=0") {
  Circuit c = parse_circuit(read_fixture("fig6.bench"));
  for (int p = 0; p < 16; ++p) {
    std::vector<uint8_t> bits{uint8_t(p & 1), uint8_t((p >> 1) & 1),
                              uint8_t((p >> 2) & 1), uint8_t((p >> 3) & 1)};
    uint8_t got = evaluate(c, input_assignment(c, bits));
    if (bits[0] == 0) CHECK(got == 0);
    else CHECK(got == 1);  // y4 is constant 0, so y5 = x1
  }
}

TEST_CASE("evaluate requires every input") {
  Circuit c = parse_circuit(read_fixture("fig2.bench"));
  Assignment a(c.input_count(), c.gate_count());
  a.set(Var::input(1), 1);
  CHECK_THROWS_AS(evaluate(c, a), MissingInput);
}

TEST_CASE("evaluate agrees with a recursive interpreter on random circuits") {
  std::mt19937_64 rng(7);
  std::vector<uint8_t> scratch;
  for (int iter = 0; iter < 500; ++iter) {
    GenConfig cfg;
    cfg.inputs = 1 + uint32_t(rng() % 8);
    cfg.gates = 1 + uint32_t(rng() % 20);
    cfg.seed = rng();
    Circuit c = generate(cfg);
    for (int k = 0; k < 20; ++k) {
      std::vector<uint8_t> bits(c.input_count());
      for (auto& b : bits) b = uint8_t(rng() & 1);
      CHECK(evaluate_inputs(c, bits, scratch) ==
            eval_recursive(c, bits, c.output()));
    }
  }
}

TEST_CASE("classify figure-2 and figure-6") {
  StructureClass fig2 = classify_structure(parse_circuit(read_fixture("fig2.bench")));
  CHECK(fig2 == StructureClass{false, true, true});

  // x3 feeds both G1 and the NOT G2
  StructureClass fig6 = classify_structure(parse_circuit(read_fixture("fig6.bench")));
  CHECK(fig6 == StructureClass{false, false, false});

  StructureClass chain = classify_structure(make_and_chain(5));
  CHECK(chain.monotone);
  CHECK(chain.tree);
  CHECK(chain.not_on_unbranched_wires);
}

TEST_CASE("classify flags one violation at a time") {
  // shared input wire, no NOT: monotone but not a tree
  Circuit shared = parse_circuit(
      "INPUT(a)\nINPUT(b)\nu = AND(a, b)\nv = OR(a, u)\nOUTPUT(v)\n");
  StructureClass sc = classify_structure(shared);
  CHECK(sc.monotone);
  CHECK_FALSE(sc.tree);
  CHECK(sc.not_on_unbranched_wires);  // vacuous, no NOT gate

  // unused declared input breaks the strict tree reading
  Circuit unused = parse_circuit("INPUT(a)\nINPUT(b)\no = NOT(a)\nOUTPUT(o)\n");
  CHECK_FALSE(classify_structure(unused).tree);
}

TEST_CASE("unreachable gates are legal and reported") {
  Circuit c = parse_circuit(
      "INPUT(a)\nINPUT(b)\ndead = AND(a, b)\no = NOT(a)\nOUTPUT(o)\n");
  auto dead = unreachable_gates(c);
  REQUIRE(dead.size() == 1);
  CHECK(c.gate(dead[0]).kind == GateKind::And);
}

TEST_CASE("generated circuits keep the topological labeling invariant") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig cfg;
    cfg.inputs = 1 + seed % 5;
    cfg.gates = 1 + seed % 25;
    cfg.seed = seed * 31 + 1;
    Circuit c = generate(cfg);
    for (uint32_t j = 1; j <= c.gate_count(); ++j)
      for (int k = 0; k < c.gate(j).arity(); ++k)
        if (!c.gate(j).in[k].is_input()) CHECK(c.gate(j).in[k].index < j);
  }
}
