#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tsa {

/// A node address in ℕ₊*; the empty sequence is the root ε.
using Position = std::vector<int>;

/// The root symbol. Never part of a stack alphabet.
inline const std::string kRootSymbol = "@";

std::string render_position(const Position& p);

namespace pred {
struct True {
  friend bool operator==(const True&, const True&) = default;
};
struct Bottom {
  friend bool operator==(const Bottom&, const Bottom&) = default;
};
struct Equals {
  std::string symbol;
  friend bool operator==(const Equals&, const Equals&) = default;
};
}  // namespace pred

using Predicate = std::variant<pred::True, pred::Bottom, pred::Equals>;

namespace instr {
struct Id {
  friend bool operator==(const Id&, const Id&) = default;
};
struct Push {
  int child = 1;
  std::string symbol;
  friend bool operator==(const Push&, const Push&) = default;
};
struct Up {
  int child = 1;
  friend bool operator==(const Up&, const Up&) = default;
};
struct Down {
  friend bool operator==(const Down&, const Down&) = default;
};
struct Set {
  std::string symbol;
  friend bool operator==(const Set&, const Set&) = default;
};
}  // namespace instr

using Instruction =
    std::variant<instr::Id, instr::Push, instr::Up, instr::Down, instr::Set>;

/// "true", "bottom", "eq(#)"
std::string render_predicate(const Predicate& p);
/// "id", "push(1,*)", "up(2)", "down", "set(#)"
std::string render_instruction(const Instruction& f);

/// Whether a predicate holds when the symbol under the pointer is `symbol`.
/// At the root the symbol is kRootSymbol.
bool predicate_admits(const Predicate& p, const std::string& symbol);

bool moves_up(const Instruction& f);  // push or up
bool is_stay(const Instruction& f);   // id or set

/// A tree over a stack alphabet with @ at the root, plus a pointer into it.
///
/// Values are immutable; instructions return new tree stacks that share
/// every untouched subtree with their source.
class TreeStack {
 public:
  /// ({ε ↦ @}, ε)
  TreeStack();

  const Position& pointer() const { return pointer_; }
  const std::string& current_symbol() const;
  bool contains(const Position& p) const;
  std::optional<std::string> symbol_at(const Position& p) const;
  std::size_t node_count() const;
  /// All nodes in lexicographic position order.
  std::map<Position, std::string> nodes() const;

  bool satisfies(const Predicate& p) const;
  /// std::nullopt when the instruction is undefined on this tree stack.
  std::optional<TreeStack> apply(const Instruction& f) const;

  /// Set notation with the pointer entry bracketed:
  /// "{(ε,@), [(1,*)], (11,#)}".
  std::string render() const;

  std::size_t hash() const;
  friend bool operator==(const TreeStack& a, const TreeStack& b);

  /// Builds a tree stack from explicit nodes; throws std::invalid_argument
  /// unless the domain is prefix-closed, @ sits exactly at the root and
  /// the pointer is in the domain.
  static TreeStack from_nodes(const std::map<Position, std::string>& nodes,
                              const Position& pointer);

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  TreeStack(NodePtr root, Position pointer);
  const Node& node_at_pointer() const;
  static NodePtr rebuild(const Node& node, const Position& path,
                         std::size_t depth, const std::string* set_symbol,
                         const instr::Push* push);

  NodePtr root_;
  Position pointer_;
};

struct TreeStackHash {
  std::size_t operator()(const TreeStack& t) const { return t.hash(); }
};

inline TreeStack initial_tree_stack() { return TreeStack(); }

inline bool check_predicate(const TreeStack& ts, const Predicate& p) {
  return ts.satisfies(p);
}

inline std::optional<TreeStack> apply_instruction(const TreeStack& ts,
                                                  const Instruction& f) {
  return ts.apply(f);
}

}  // namespace tsa
