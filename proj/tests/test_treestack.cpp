#include <doctest.h>

#include <random>

#include "tsa/treestack.hpp"

using namespace tsa;

TEST_CASE("fresh tree stack holds only the root") {
  TreeStack ts;
  CHECK(ts.pointer().empty());
  CHECK(ts.current_symbol() == kRootSymbol);
  CHECK(ts.node_count() == 1);
  CHECK(ts.satisfies(pred::Bottom{}));
  CHECK(ts.satisfies(pred::True{}));
  CHECK_FALSE(ts.satisfies(pred::Equals{"*"}));
  CHECK(ts.render() == "{[(ε,@)]}");
}

TEST_CASE("push, up and down move the pointer") {
  auto ts = TreeStack().apply(instr::Push{1, "*"});
  REQUIRE(ts);
  CHECK(ts->pointer() == Position{1});
  CHECK(ts->current_symbol() == "*");
  CHECK_FALSE(ts->satisfies(pred::Bottom{}));

  // pushing onto an occupied child is undefined
  auto down = ts->apply(instr::Down{});
  REQUIRE(down);
  CHECK_FALSE(down->apply(instr::Push{1, "#"}));
  auto up = down->apply(instr::Up{1});
  REQUIRE(up);
  CHECK(*up == *ts);
  CHECK_FALSE(down->apply(instr::Up{2}));
  CHECK_FALSE(down->apply(instr::Down{}));
}

TEST_CASE("set rewrites the current node and is forbidden at the root") {
  CHECK_FALSE(TreeStack().apply(instr::Set{"*"}));
  auto ts = TreeStack().apply(instr::Push{2, "*"})->apply(instr::Set{"#"});
  REQUIRE(ts);
  CHECK(ts->symbol_at({2}) == "#");
  CHECK(ts->render() == "{(ε,@), [(2,#)]}");
}

TEST_CASE("persistent updates leave earlier versions untouched") {
  const auto a = *TreeStack().apply(instr::Push{1, "*"});
  const auto b = *a.apply(instr::Set{"#"});
  CHECK(a.symbol_at({1}) == "*");
  CHECK(b.symbol_at({1}) == "#");
  CHECK(a.node_count() == 2);
}

TEST_CASE("from_nodes round-trips through nodes") {
  std::map<Position, std::string> nodes{{{}, "@"}, {{1}, "*"}, {{1, 1}, "#"}, {{2}, "*"}};
  auto ts = TreeStack::from_nodes(nodes, {1, 1});
  CHECK(ts.nodes() == nodes);
  CHECK(ts.pointer() == Position{1, 1});
  CHECK(ts.render() == "{(ε,@), (1,*), [(11,#)], (2,*)}");
}

TEST_CASE("random instruction walks keep the tree prefix-closed") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    TreeStack ts;
    for (int s = 0; s < 30; ++s) {
      const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
      const int child = std::uniform_int_distribution<int>(1, 3)(rng);
      Instruction f = kind == 0   ? Instruction(instr::Push{child, "*"})
                      : kind == 1 ? Instruction(instr::Up{child})
                      : kind == 2 ? Instruction(instr::Down{})
                                  : Instruction(instr::Set{"#"});
      if (auto next = ts.apply(f)) ts = *next;
    }
    const auto nodes = ts.nodes();
    for (const auto& [p, sym] : nodes) {
      if (p.empty()) continue;
      CHECK(nodes.contains(Position(p.begin(), p.end() - 1)));
    }
    CHECK(ts.contains(ts.pointer()));
    CHECK(TreeStack::from_nodes(nodes, ts.pointer()) == ts);
    CHECK(TreeStack::from_nodes(nodes, ts.pointer()).hash() == ts.hash());
  }
}
