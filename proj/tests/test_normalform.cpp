#include <doctest.h>

#include "oracles.hpp"
#include "tsa/io.hpp"
#include "tsa/normalform.hpp"

using namespace tsa;

namespace {

Tsa fixture(const std::string& name) { return parse_automaton(read_file(TSA_FIXTURES "/" + name)); }

SearchBudget budget() { return SearchBudget{}; }

}  // namespace

TEST_CASE("example automata are cycle-free, the self-loop is not") {
  CHECK(is_cycle_free(fixture("monadic.tsa")));
  CHECK(is_cycle_free(fixture("branching.tsa")));
  const auto loop = find_stay_loop(fixture("selfloop.tsa"));
  REQUIRE(loop);
  CHECK(loop->state == "q");
  CHECK(loop->run == Run{0});
}

TEST_CASE("stay graph edges follow predicates") {
  const Tsa m = fixture("monadic.tsa");
  StayGraph graph(m);
  CHECK(graph.symbols().front() == kRootSymbol);
  // the only stay transition of the monadic automaton needs the root
  CHECK(graph.edges({"4", kRootSymbol}).size() == 1);
  CHECK(graph.edges({"4", "*"}).empty());
}

TEST_CASE("unfolding a one-step loop") {
  const Tsa m = fixture("selfloop.tsa");
  const Tsa u = unfold_loop(m, *find_stay_loop(m));
  CHECK(validate_automaton(u).empty());
  CHECK(u.states.size() == m.states.size() + 4);
  CHECK_FALSE(u.transition_index("t1"));
  for (const char* label : {"q^push", "q^iter", "q^body1", "q^stop", "q^down", "q^return"})
    CHECK(u.transition_index(label));
  CHECK(u.stack_alphabet.contains("*"));
  CHECK(u.stack_alphabet.contains("#"));
}

TEST_CASE("cycle removal on the self-loop preserves its language") {
  const Tsa m = fixture("selfloop.tsa");
  const auto r = remove_cycles(m);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(is_cycle_free(r.automaton));
  CHECK(enumerate_bounded_automaton_language(r.automaton, 8, budget()).words ==
        oracle::a_star_b(8));
  CHECK(oracle::automaton_words(r.automaton, 6, 60) == oracle::a_star_b(6));
}

TEST_CASE("cycle removal leaves cycle-free automata alone") {
  const Tsa m = fixture("monadic.tsa");
  const auto r = remove_cycles(m);
  CHECK(r.iterations == 0);
  CHECK(r.automaton == m);
}

TEST_CASE("cycle removal stops at the iteration cap") {
  const Tsa m = fixture("selfloop.tsa");
  const auto r = remove_cycles(m, 0);
  CHECK_FALSE(r.converged);
  REQUIRE(r.remaining);
}

TEST_CASE("stack normal form") {
  const Tsa m2 = fixture("branching.tsa");
  const auto before = is_stack_normal_form_bounded(m2, 8, budget());
  CHECK(before.verdict == SnfVerdict::kViolated);
  REQUIRE(before.witness);
  CHECK_FALSE(before.pointer.empty());

  const Tsa n = to_stack_normal_form(m2);
  CHECK(validate_automaton(n).empty());
  CHECK(n.final_states.size() == 1);
  CHECK(is_stack_normal_form_bounded(n, 8, budget()).verdict == SnfVerdict::kHolds);
  CHECK(is_cycle_free(n));
  CHECK(enumerate_bounded_automaton_language(n, 8, budget()).words ==
        oracle::crossed_blocks(8, 1));

  CHECK(is_stack_normal_form_bounded(fixture("monadic.tsa"), 8, budget()).verdict ==
        SnfVerdict::kHolds);
}

TEST_CASE("fresh names avoid collisions") {
  CHECK(fresh_name("q", {"p"}) == "q");
  CHECK(fresh_name("q", {"q"}) != "q");
  CHECK_FALSE(std::set<std::string>{"q", "q_1"}.contains(fresh_name("q", {"q", "q_1"})));
}
