#include <doctest.h>

#include <random>

#include "json.hpp"
#include "oracles.hpp"
#include "tsa/io.hpp"

using namespace tsa;

TEST_CASE("automaton text round-trips") {
  const Tsa m = parse_automaton(read_file(TSA_FIXTURES "/branching.tsa"));
  CHECK(m.states.size() == 9);
  CHECK(m.transitions.size() == 15);
  CHECK(m.transitions[4].instruction == Instruction(instr::Push{2, "*"}));
  CHECK(m.transitions[14].predicate == Predicate(pred::Equals{"#"}));
  CHECK(m.terminals == std::set<Symbol>{"a", "b", "c", "d"});
  CHECK(parse_automaton(print_automaton(m)) == m);
}

TEST_CASE("grammar text round-trips") {
  const Pmcfg g = parse_grammar(read_file(TSA_FIXTURES "/crossed.mcfg"));
  CHECK(parse_grammar(print_grammar(g)) == g);
  const Pmcfg labelled = parse_grammar(
      "initial: S\n"
      "sorts: X=2\n"
      "top: S -> [ 't1' \"ab\" x1.1 ] ( A )\n"
      "A -> [ \"\" ] ( )\n");
  CHECK(labelled.rules[0].label == "top");
  CHECK(labelled.rules[0].comp.components[0].size() == 4);
  CHECK(labelled.sort_of("X") == 2);
  CHECK(parse_grammar(print_grammar(labelled)) == labelled);
}

TEST_CASE("random grammars round-trip through text") {
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Pmcfg g = oracle::random_grammar(rng);
    CHECK(parse_grammar(print_grammar(g)) == g);
  }
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_automaton("states: 1\ninitial: 1\nfinal: 1\nstack: *\ntrans: 1 -a-> 2 [true] id\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_automaton("states: 1\nstack: @\n"), ParseError);
  CHECK_THROWS_AS(parse_grammar("initial: S\nS -> [ x1 ] ( A )\n"), ParseError);
  CHECK_THROWS_AS(parse_grammar("S -> [ \"a\" \n"), ParseError);
}

TEST_CASE("runs parse from labels or indices") {
  const Tsa m = parse_automaton(read_file(TSA_FIXTURES "/monadic.tsa"));
  CHECK(parse_run(m, "t2 t3 t5 t7 t9") == Run{1, 2, 4, 6, 8});
  CHECK(parse_run(m, "2 3\n5 7 9") == Run{1, 2, 4, 6, 8});
  CHECK_THROWS_AS(parse_run(m, "t2 t99"), ParseError);
}

TEST_CASE("trace json lists every step") {
  const Tsa m = parse_automaton(read_file(TSA_FIXTURES "/monadic.tsa"));
  const Run run = parse_run(m, "t2 t3 t5 t7 t9");
  const auto json = nlohmann::json::parse(trace_to_json(trace_records(m, run, replay(m, {}, run).trace)));
  REQUIRE(json.size() == 6);
  CHECK(json[0]["transition"].is_null());
  CHECK(json[1]["transition"] == "t2");
  CHECK(json[1]["pointer"] == nlohmann::json::array({1}));
  CHECK(json[5]["state"] == "5");
}
