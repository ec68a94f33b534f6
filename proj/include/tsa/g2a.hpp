#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsa/automaton.hpp"
#include "tsa/grammar.hpp"

namespace tsa {

/// The box symbol, also the only final state of ℳ(G).
inline const std::string kBox = "□";

/// Initial state used instead of □ when ε ∉ L(G); with □ both initial and
/// final the empty run would accept ε.
inline const std::string kStart = "▷";

/// ⟨r, i, j⟩: in rule r, right after the j-th item of component i.
struct RulePosition {
  std::size_t rule = 0;  // index into Pmcfg::rules
  int component = 1;
  int item = 0;

  friend auto operator<=>(const RulePosition&, const RulePosition&) = default;
};

struct CompiledState {
  enum class Kind { kStart, kBox, kBoxPlus, kBoxMinus, kPos, kPosPlus, kPosMinus };
  Kind kind = Kind::kBox;
  RulePosition pos;  // unused for kStart and the box kinds
};

struct CompiledAutomaton {
  Pmcfg grammar;
  Tsa automaton;
  std::map<std::string, CompiledState> states;
  /// Stack symbols naming whole rules, mapped to rule indices.
  std::map<std::string, std::size_t> rule_symbols;
  /// k when the grammar is a k-MCFG.
  std::optional<int> restriction;
};

/// "⟨r1,1,0⟩" using the rule's label.
std::string render_rule_position(const Pmcfg& g, const RulePosition& p);

/// fan-out when g is linear (an MCFG), absent otherwise.
std::optional<int> restriction_bound(const Pmcfg& g);

/// The automaton ℳ(G), starting in □ when ε ∈ L(G) and in ▷ otherwise.
/// Transitions are labelled init(r), read(r,i,j), call(r,i,j,r'),
/// resume1(r,i,j), resume2(r,i,j,r'), suspend1(r,i,q) and suspend2(q);
/// duplicates are emitted once. Throws std::invalid_argument on an invalid
/// grammar.
CompiledAutomaton grammar_to_automaton(const Pmcfg& g);

/// Search budget with the counter prune set from the restriction bound.
SearchBudget compiled_budget(const CompiledAutomaton& c, SearchBudget base);

struct ExtractedDerivation {
  /// Rule index at each position of the first subtree of the final stack.
  std::map<Position, std::size_t> nodes;
  /// Set when every node has all the children its rule asks for.
  std::optional<Derivation> derivation;
};

/// The first subtree of an accepting stack, read as a rule tree. Throws
/// std::invalid_argument when a node there does not carry a rule symbol.
ExtractedDerivation extract_derivation(const CompiledAutomaton& c,
                                       const TreeStack& final_storage);

/// Plain ⟨r,i,j⟩ states seen at one position ρ ≠ ε must all name the same
/// rule. Returns a description of the first conflict.
std::optional<std::string> check_rule_constancy(const CompiledAutomaton& c,
                                                const std::vector<Configuration>& trace);

/// Accepting runs start with init(·) and end with suspend2(□).
std::optional<std::string> check_run_shape(const CompiledAutomaton& c, const Run& run);

}  // namespace tsa
