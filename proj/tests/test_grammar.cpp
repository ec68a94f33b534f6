#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsa/grammar.hpp"
#include "tsa/io.hpp"

using namespace tsa;

namespace {

Pmcfg crossed() { return parse_grammar(read_file(TSA_FIXTURES "/crossed.mcfg")); }

}  // namespace

TEST_CASE("crossed-blocks grammar is a valid 2-MCFG") {
  const Pmcfg g = crossed();
  CHECK(validate_grammar(g).empty());
  const auto c = classify(g);
  CHECK(c.is_mcfg);
  CHECK(c.is_nondeleting);
  CHECK(c.fan_out == 2);
  CHECK(g.sort_of("S") == 1);
  CHECK(g.sort_of("A") == 2);
  CHECK(g.rules.size() == 5);
  CHECK(g.rules[3].label == "r4");
}

TEST_CASE("bounded language of the crossed-blocks grammar") {
  const Pmcfg g = crossed();
  const std::set<Word> expected{{}, oracle::word("ac"), oracle::word("bd"), oracle::word("abcd"),
                                oracle::word("aacc"), oracle::word("bbdd")};
  CHECK(enumerate_bounded_language(g, 4, 12) == expected);
  CHECK(enumerate_bounded_language(g, 12, 40) == oracle::crossed_blocks(12, 0));
  CHECK(oracle::grammar_words(g, 12) == oracle::crossed_blocks(12, 0));
}

TEST_CASE("derivation evaluation") {
  const Pmcfg g = crossed();
  // r1(r3, r4(r5))
  const Derivation d{0, {Derivation{2, {}}, Derivation{3, {Derivation{4, {}}}}}};
  CHECK(d.size() == 4);
  CHECK(evaluate_derivation(g, d) == StringTuple{oracle::word("bd")});
  CHECK(render_derivation(g, d) == "r1(r3, r4(r5))");
  const Derivation bad{0, {Derivation{3, {Derivation{4, {}}}}, Derivation{2, {}}}};
  CHECK_THROWS(evaluate_derivation(g, bad));
}

TEST_CASE("validation catches sort mismatches and unknown nonterminals") {
  Pmcfg g = crossed();
  g.rules[1].comp.components.pop_back();
  CHECK_FALSE(validate_grammar(g).empty());

  g = crossed();
  g.rules[0].rhs[1] = "Z";
  CHECK_FALSE(validate_grammar(g).empty());

  g = crossed();
  g.rules[0].comp.components[0].push_back(Variable{3, 1});
  CHECK_FALSE(validate_grammar(g).empty());
}

TEST_CASE("copying rules make the grammar non-linear") {
  const Pmcfg g = parse_grammar(
      "initial: S\n"
      "S -> [ x1.1 x1.1 ] ( A )\n"
      "A -> [ \"a\" x1.1 ] ( A )\n"
      "A -> [ \"\" ] ( )\n");
  const auto c = classify(g);
  CHECK_FALSE(c.is_mcfg);
  CHECK(c.is_nondeleting);
  std::set<Word> expected;
  for (std::size_t n = 0; 2 * n <= 8; ++n)
    expected.insert(oracle::concat({oracle::repeat("a", n), oracle::repeat("a", n)}));
  CHECK(enumerate_bounded_language(g, 8, 20) == expected);
}

TEST_CASE("productive and reachable restrictions") {
  const Pmcfg g = parse_grammar(
      "initial: S\n"
      "S -> [ x1.1 ] ( A )\n"
      "S -> [ x1.1 ] ( D )\n"
      "A -> [ \"a\" ] ( )\n"
      "D -> [ x1.1 ] ( D )\n"
      "U -> [ \"u\" ] ( )\n");
  CHECK(productive_nonterminals(g) == std::set<std::string>{"S", "A", "U"});
  const auto p = restrict_to_productive(g);
  CHECK(p.rules.size() == 3);
  const auto r = restrict_to_reachable(p);
  CHECK(r.rules.size() == 2);
  CHECK(enumerate_bounded_language(r, 4, 10) == enumerate_bounded_language(g, 4, 10));
}

TEST_CASE("random grammars: enumeration agrees with the fixpoint oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Pmcfg g = oracle::random_grammar(rng);
    REQUIRE(validate_grammar(g).empty());
    INFO(print_grammar(g));
    CHECK(enumerate_bounded_language(g, 6, 14) == oracle::grammar_words(g, 6));
  }
}

TEST_CASE("empty word membership") {
  CHECK(derives_empty_word(crossed()));
  CHECK_FALSE(derives_empty_word(parse_grammar("initial: S\nS -> [ \"a\" ] ( )\n")));
  // the deleted argument may be non-empty
  CHECK(derives_empty_word(parse_grammar(
      "initial: S\nS -> [ x1.2 ] ( A )\nA -> [ \"a\" , \"\" ] ( )\n")));
  CHECK_FALSE(derives_empty_word(parse_grammar(
      "initial: S\nS -> [ x1.1 x1.2 ] ( A )\nA -> [ \"a\" , \"\" ] ( )\nA -> [ \"\" , \"b\" ] ( )\n")));
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Pmcfg g = oracle::random_grammar(rng);
    CHECK(derives_empty_word(g) == oracle::grammar_words(g, 0).contains(Word{}));
  }
}
