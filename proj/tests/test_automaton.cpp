#include <doctest.h>

#include "worked_runs.hpp"
#include "oracles.hpp"
#include "tsa/automaton.hpp"
#include "tsa/io.hpp"

using namespace tsa;

namespace {

Tsa fixture(const std::string& name) { return parse_automaton(read_file(TSA_FIXTURES "/" + name)); }

}  // namespace

TEST_CASE("monadic run on abcd reproduces every configuration") {
  const Tsa m = fixture("monadic.tsa");
  const auto run = worked::run_of(m, worked::kMonadicRun);
  const auto result = replay(m, oracle::word("abcd"), run);
  REQUIRE(result.ok());
  CHECK(result.accepting(m));
  const auto expected = worked::monadic_trace();
  REQUIRE(result.trace.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    INFO("configuration " << i);
    CHECK(worked::matches(result.trace[i], expected[i]));
  }
}

TEST_CASE("branching run on aabccd reproduces the displayed configurations") {
  const Tsa m = fixture("branching.tsa");
  const auto run = worked::run_of(m, worked::kBranchingRun);
  const auto result = replay(m, oracle::word("aabccd"), run);
  REQUIRE(result.ok());
  CHECK(result.accepting(m));
  const auto expected = worked::branching_trace();
  for (std::size_t i = 0; i < expected.size(); ++i) {
    INFO("configuration after " << worked::kBranchingShownAfter[i] << " steps");
    CHECK(worked::matches(result.trace.at(worked::kBranchingShownAfter[i]), expected[i]));
  }
  CHECK(result.trace.back().storage.pointer() == Position{2, 1});
}

TEST_CASE("replay reports the first inapplicable step") {
  const Tsa m = fixture("monadic.tsa");
  const auto result = replay(m, oracle::word("abcd"), worked::run_of(m, {"t1", "t3"}));
  REQUIRE_FALSE(result.ok());
  CHECK(result.failure->step == 1);
  CHECK(result.failure->kind == ReplayFailure::Kind::kInapplicable);
  CHECK(result.trace.size() == 2);

  const auto leftover = replay(m, oracle::word("ab"), worked::run_of(m, {"t2"}));
  REQUIRE_FALSE(leftover.ok());
  CHECK(leftover.failure->kind == ReplayFailure::Kind::kLeftoverInput);
}

TEST_CASE("recognition finds the least run") {
  const Tsa m = fixture("monadic.tsa");
  const auto empty = recognize(m, {}, SearchBudget{});
  REQUIRE(empty.run);
  CHECK(render_run(m, *empty.run) == "t2 t3 t5 t7 t9");

  const auto abcd = recognize(m, oracle::word("abcd"), SearchBudget{});
  REQUIRE(abcd.run);
  CHECK(*abcd.run == worked::run_of(m, worked::kMonadicRun));

  const auto miss = recognize(m, oracle::word("abbcd"), SearchBudget{});
  CHECK_FALSE(miss.run);
  CHECK_FALSE(miss.truncated);
}

TEST_CASE("counters of the monadic run on abcd") {
  const Tsa m = fixture("monadic.tsa");
  const auto c = counters(m, oracle::word("abcd"), worked::run_of(m, worked::kMonadicRun));
  CHECK(c == CounterMap{{{1}, 2}, {{1, 1}, 2}});
  CHECK(max_counter(c) == 2);
  CHECK(check_run_restriction(m, oracle::word("abcd"), worked::run_of(m, worked::kMonadicRun), 2));
  CHECK_FALSE(
      check_run_restriction(m, oracle::word("abcd"), worked::run_of(m, worked::kMonadicRun), 1));
  const auto history =
      counter_history(m, oracle::word("abcd"), worked::run_of(m, worked::kMonadicRun));
  CHECK(history.size() == 10);
  CHECK(history.front().empty());
  CHECK(history.back() == c);
}

TEST_CASE("bounded languages of the two example automata") {
  const Tsa m = fixture("monadic.tsa");
  const auto l8 = enumerate_bounded_automaton_language(m, 8, SearchBudget{});
  CHECK(l8.words == oracle::equal_blocks(8));
  const auto l12 = enumerate_bounded_automaton_language(m, 12, SearchBudget{});
  CHECK(l12.words == oracle::equal_blocks(12));

  const Tsa m2 = fixture("branching.tsa");
  CHECK(enumerate_bounded_automaton_language(m2, 6, SearchBudget{}).words ==
        oracle::crossed_blocks(6, 1));
  CHECK(enumerate_bounded_automaton_language(m2, 8, SearchBudget{}).words ==
        oracle::crossed_blocks(8, 1));
}

TEST_CASE("search agrees with the breadth-first oracle") {
  for (const char* name : {"monadic.tsa", "branching.tsa", "selfloop.tsa"}) {
    INFO(name);
    const Tsa m = fixture(name);
    CHECK(enumerate_bounded_automaton_language(m, 6, SearchBudget{}).words ==
          oracle::automaton_words(m, 6, 40));
  }
}

TEST_CASE("restriction prune keeps every 2-restricted word") {
  const Tsa m = fixture("monadic.tsa");
  SearchBudget b;
  b.restriction_k = 2;
  CHECK(enumerate_bounded_automaton_language(m, 12, b).words == oracle::equal_blocks(12));
  b.restriction_k = 1;
  // every accepting run re-enters position 1 after rewinding
  CHECK(enumerate_bounded_automaton_language(m, 12, b).words.empty());
}

TEST_CASE("trace records carry pointer and remaining input") {
  const Tsa m = fixture("monadic.tsa");
  const auto run = worked::run_of(m, worked::kMonadicRun);
  const auto records = trace_records(m, run, replay(m, oracle::word("abcd"), run).trace);
  REQUIRE(records.size() == 10);
  CHECK_FALSE(records[0].transition);
  CHECK(records[1].transition == "t1");
  CHECK(records[2].pointer == Position{1, 1});
  CHECK(records[2].storage == "{(ε,@), (1,*), [(11,#)]}");
  CHECK(records[2].remaining == "bcd");
}

TEST_CASE("validation flags undeclared names") {
  Tsa m = fixture("monadic.tsa");
  CHECK(validate_automaton(m).empty());
  m.transitions[0].target = "9";
  CHECK_FALSE(validate_automaton(m).empty());
}
