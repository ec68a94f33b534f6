#include <doctest.h>

#include "worked_runs.hpp"
#include "oracles.hpp"
#include "tsa/g2a.hpp"
#include "tsa/io.hpp"

using namespace tsa;

namespace {

CompiledAutomaton compiled() {
  return grammar_to_automaton(parse_grammar(read_file(TSA_FIXTURES "/crossed.mcfg")));
}

}  // namespace

TEST_CASE("compiled automaton shape") {
  const auto c = compiled();
  const Tsa& m = c.automaton;
  CHECK(validate_automaton(m).empty());
  CHECK(m.initial_state == kBox);
  CHECK(m.final_states == std::set<std::string>{kBox});
  CHECK(c.restriction == 2);
  CHECK(c.rule_symbols.size() == 5);
  CHECK(m.stack_alphabet.contains("r3"));
  CHECK(m.stack_alphabet.contains("⟨r1,1,4⟩"));
  // labels are unique
  std::set<std::string> labels;
  for (const auto& t : m.transitions) CHECK(labels.insert(t.label).second);
}

TEST_CASE("compiled run on bd reproduces the displayed configurations") {
  const auto c = compiled();
  const auto run = worked::run_of(c.automaton, worked::compiled_run());
  const auto result = replay(c.automaton, oracle::word("bd"), run);
  REQUIRE(result.ok());
  CHECK(result.accepting(c.automaton));
  for (const auto& [after, shown] : worked::compiled_trace()) {
    INFO("configuration after " << after << " steps");
    CHECK(worked::matches_storage(result.trace.at(after), shown));
  }
  CHECK_FALSE(check_run_shape(c, run));
  CHECK_FALSE(check_rule_constancy(c, result.trace));

  const auto extracted = extract_derivation(c, result.trace.back().storage);
  REQUIRE(extracted.derivation);
  CHECK(render_derivation(c.grammar, *extracted.derivation) == "r1(r3, r4(r5))");
  CHECK(evaluate_derivation(c.grammar, *extracted.derivation) ==
        StringTuple{oracle::word("bd")});
}

TEST_CASE("compiled automaton accepts exactly the grammar's words") {
  const auto c = compiled();
  const auto budget = compiled_budget(c, SearchBudget{});
  const auto lang = enumerate_bounded_automaton_language(c.automaton, 8, budget);
  CHECK(lang.words == oracle::crossed_blocks(8, 0));
  CHECK(lang.words == oracle::grammar_words(c.grammar, 8));
}

TEST_CASE("every accepting run yields a derivation of its word") {
  const auto c = compiled();
  const auto budget = compiled_budget(c, SearchBudget{});
  for (const auto& w : oracle::crossed_blocks(8, 0)) {
    INFO(render_word(w));
    const auto found = recognize(c.automaton, w, budget);
    REQUIRE(found.run);
    // □ is initial and final here, so ε also has the empty run
    if (found.run->empty()) {
      CHECK(w.empty());
      continue;
    }
    const auto result = replay(c.automaton, w, *found.run);
    REQUIRE(result.accepting(c.automaton));
    CHECK_FALSE(check_run_shape(c, *found.run));
    CHECK_FALSE(check_rule_constancy(c, result.trace));
    CHECK(check_run_restriction(c.automaton, w, *found.run, 2));
    const auto d = extract_derivation(c, result.trace.back().storage).derivation;
    REQUIRE(d);
    CHECK(evaluate_derivation(c.grammar, *d) == StringTuple{w});
  }
}

TEST_CASE("a fresh start state keeps ε out when the grammar lacks it") {
  const Pmcfg g = parse_grammar(
      "initial: S\n"
      "S -> [ x1.1 x1.2 ] ( A )\n"
      "A -> [ \"a\" x1.1 , \"b\" x1.2 ] ( A )\n"
      "A -> [ \"a\" , \"b\" ] ( )\n");
  const auto c = grammar_to_automaton(g);
  CHECK(c.automaton.initial_state == kStart);
  CHECK_FALSE(c.automaton.is_final(kStart));
  const auto lang =
      enumerate_bounded_automaton_language(c.automaton, 6, compiled_budget(c, SearchBudget{}));
  CHECK(lang.words == oracle::grammar_words(g, 6));
  CHECK_FALSE(lang.words.contains(Word{}));
}

TEST_CASE("rule constancy flags a position visited under two rules") {
  const auto c = compiled();
  std::vector<Configuration> trace;
  auto storage = *TreeStack().apply(instr::Push{1, kBox});
  trace.push_back({"⟨r2,1,0⟩", storage, {}});
  trace.push_back({"⟨r3,1,0⟩", storage, {}});
  CHECK(check_rule_constancy(c, trace));
}

TEST_CASE("invalid grammars are rejected") {
  Pmcfg g = parse_grammar(read_file(TSA_FIXTURES "/crossed.mcfg"));
  g.rules[0].rhs[0] = "Z";
  CHECK_THROWS_AS(grammar_to_automaton(g), std::invalid_argument);
}

TEST_CASE("non-linear grammars compile without a restriction bound") {
  const Pmcfg g = parse_grammar(
      "initial: S\n"
      "S -> [ x1.1 x1.1 ] ( A )\n"
      "A -> [ \"a\" x1.1 ] ( A )\n"
      "A -> [ \"\" ] ( )\n");
  const auto c = grammar_to_automaton(g);
  CHECK_FALSE(c.restriction);
  const auto lang = enumerate_bounded_automaton_language(c.automaton, 6, SearchBudget{});
  CHECK(lang.words == enumerate_bounded_language(g, 6, 20));
}
