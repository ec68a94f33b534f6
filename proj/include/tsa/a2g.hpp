#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsa/automaton.hpp"
#include "tsa/grammar.hpp"
#include "tsa/normalform.hpp"

namespace tsa {

/// All stay runs from (q, γ) to (q′, γ′), in lexicographic order. Throws
/// std::invalid_argument when m is not cycle-free.
std::vector<Run> stay_runs(const Tsa& m, const std::string& q, const std::string& q2,
                           const std::string& gamma, const std::string& gamma2);

/// Runs of parent-node activity between two child excursions.
///
///   kUp      stays, then a push or up into child j
///   kDown    a down out of a child, then stays
///   kDownUp  a down, stays, then a push or up
///   kStay    stays only
enum class SegmentKind { kUp, kDown, kDownUp, kStay };

struct Segment {
  SegmentKind kind = SegmentKind::kStay;
  Run run;
  std::string parent_from;  // γ: parent symbol when the stay part starts
  std::string parent_to;    // γ′: parent symbol when it ends
  std::optional<std::string> child_from;  // β′: child symbol the down admits
  std::optional<std::string> child_to;    // β: pushed symbol; unset after up
  std::optional<int> child_index;         // j of the final push/up
  std::string entry_state;  // source of the first transition (or of the stays)
  std::string exit_state;   // target of the last transition
  bool ends_with_push = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// (q′, q″; j, β, β′): the child is entered in state q′ with symbol β and
/// left towards the parent from state q″ with symbol β′.
struct Gap {
  std::string exit_state;
  std::string entry_state;
  int child = 1;
  std::optional<std::string> pushed;  // β when the entry was a push
  std::string child_exit;             // β′

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// ⟨q₁, q₂; γ₁, γ₂⟩
struct TupleType {
  std::string from_state, to_state;
  std::string from_symbol, to_symbol;

  friend auto operator<=>(const TupleType&, const TupleType&) = default;
};

struct SegmentTuple {
  std::vector<Segment> segments;
  std::vector<Gap> gaps;  // segments.size() - 1 entries
  TupleType type;

  friend bool operator==(const SegmentTuple&, const SegmentTuple&) = default;
};

/// ⟨q₁, q̄₁, …, q_s, q̄_s; γ₀, …, γ_s⟩
struct TypedNonterminal {
  std::vector<std::string> states;   // 2s entries
  std::vector<std::string> symbols;  // s + 1 entries

  std::size_t fan_out() const { return symbols.empty() ? 0 : symbols.size() - 1; }
  std::string render() const;

  friend auto operator<=>(const TypedNonterminal&, const TypedNonterminal&) = default;
};

struct SegmentSequence {
  std::vector<SegmentTuple> tuples;
  /// (tuple, gap) → (child number, occurrence), both 1-based: π_T.
  std::map<std::pair<int, int>, std::pair<int, int>> child_map;
  int distinct_children = 0;
  TypedNonterminal lhs;
  std::vector<TypedNonterminal> rhs;
};

/// Every Up, Down and DownUp segment over all parameter choices, plus the
/// nonempty stay runs as kStay segments. Requires m cycle-free.
std::vector<Segment> enumerate_segments(const Tsa& m);

/// Admissible tuples entering each child at most k times, over child
/// indices occurring in δ. Requires m cycle-free.
std::vector<SegmentTuple> admissible_tuples(const Tsa& m, int k);

/// Checks the sequence conditions (first entry into a child is a push,
/// child symbols chain from exit to next entry, parent symbols chain
/// across tuples, at most k entries per child) and fills in the child
/// numbering and the types. Returns the failed condition otherwise.
std::variant<SegmentSequence, std::string> check_sequence(const std::vector<SegmentTuple>& t,
                                                          int k);

/// All admissible sequences of type `lhs`, in canonical order.
std::vector<SegmentSequence> admissible_sequences(const Tsa& m, int k,
                                                  const TypedNonterminal& lhs);

/// Admissible sequences of every type reachable from the initial types
/// ⟨q_i, q_f; @, @⟩.
std::vector<SegmentSequence> admissible_sequences(const Tsa& m, int k);

/// The rule A → [u₁, …, u_s](B₁, …, B_m) of a sequence, with transition
/// labels as terminals.
Rule sequence_rule(const Tsa& m, const SegmentSequence& seq);

/// G′(ℳ): generates the accepting runs of m as strings of transition
/// labels, pruned to productive and reachable rules. Throws
/// std::invalid_argument when m has a stay loop or is found to accept off
/// the root.
Pmcfg automaton_to_run_grammar(const Tsa& m, int k);

/// Replaces every transition label by the symbol its transition reads.
/// Throws std::invalid_argument on labels not in m.
Pmcfg apply_output_homomorphism(const Pmcfg& run_grammar, const Tsa& m);

struct AutomatonToGrammar {
  Pmcfg grammar;
  Pmcfg run_grammar;
  Tsa normalized;  // cycle-free, stack normal form
  std::size_t cycle_iterations = 0;
};

/// remove_cycles, to_stack_normal_form, run grammar, homomorphism, then
/// restrict_to_productive. Throws std::runtime_error when cycle removal
/// does not converge within `max_iterations`.
AutomatonToGrammar automaton_to_grammar(const Tsa& m, int k,
                                        std::size_t max_iterations = 100);

}  // namespace tsa
