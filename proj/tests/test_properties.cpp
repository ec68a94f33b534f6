#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsa/a2g.hpp"
#include "tsa/equiv.hpp"
#include "tsa/g2a.hpp"
#include "tsa/io.hpp"
#include "tsa/normalform.hpp"

using namespace tsa;

TEST_CASE("compiled random grammars agree with the fixpoint oracle") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const Pmcfg g = oracle::productive_grammar(rng);
    INFO(print_grammar(g));
    const auto c = grammar_to_automaton(g);
    const auto lang =
        enumerate_bounded_automaton_language(c.automaton, 5, compiled_budget(c, SearchBudget{}));
    CHECK(lang.words == oracle::grammar_words(g, 5));
  }
}

TEST_CASE("compiled automata of k-MCFGs are k-restricted on found runs") {
  std::mt19937 rng(202);
  for (int trial = 0; trial < 15; ++trial) {
    const Pmcfg g = oracle::productive_grammar(rng);
    INFO(print_grammar(g));
    const auto c = grammar_to_automaton(g);
    REQUIRE(c.restriction);
    SearchBudget unpruned;
    for (const auto& w : oracle::grammar_words(g, 4)) {
      const auto found = recognize(c.automaton, w, unpruned);
      if (!found.run) continue;
      CHECK(check_run_restriction(c.automaton, w, *found.run, *c.restriction));
    }
  }
}

TEST_CASE("round trip grammar to automaton to grammar preserves short words") {
  std::mt19937 rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    const Pmcfg g = oracle::productive_grammar(rng);
    INFO(print_grammar(g));
    const auto c = grammar_to_automaton(g);
    const auto back = automaton_to_grammar(c.automaton, *c.restriction);
    CHECK(oracle::grammar_words(back.grammar, 5) == oracle::grammar_words(g, 5));
  }
}

TEST_CASE("stack normal form preserves languages of compiled automata") {
  std::mt19937 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Pmcfg g = oracle::productive_grammar(rng);
    const auto c = grammar_to_automaton(g);
    const auto budget = compiled_budget(c, SearchBudget{});
    const Tsa n = to_stack_normal_form(c.automaton);
    CHECK(enumerate_bounded_automaton_language(n, 4, budget).words ==
          enumerate_bounded_automaton_language(c.automaton, 4, budget).words);
  }
}

TEST_CASE("language comparison reports both directions") {
  const Pmcfg g = parse_grammar(read_file(TSA_FIXTURES "/crossed.mcfg"));
  const Tsa m = parse_automaton(read_file(TSA_FIXTURES "/branching.tsa"));
  const auto r = compare_languages(g, m, 6, 20, SearchBudget{});
  CHECK_FALSE(r.equivalent());
  CHECK(r.only_in_grammar.contains(Word{}));
  CHECK(r.only_in_grammar.contains(oracle::word("ac")));
  CHECK(r.only_in_automaton.empty());
  const auto same = compare_languages(g, grammar_to_automaton(g).automaton, 6, 20,
                                      compiled_budget(grammar_to_automaton(g), SearchBudget{}));
  CHECK(same.equivalent());
}
