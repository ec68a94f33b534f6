#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tsa/automaton.hpp"

namespace tsa {

/// (state, symbol under the pointer); the symbol may be @.
using StayVertex = std::pair<std::string, std::string>;

struct StayEdge {
  std::size_t transition;
  StayVertex target;
};

/// Id/Set transitions as edges between (state, symbol) vertices over
/// Γ ∪ {@}. At @ only Id under true or bottom moves; for γ ∈ Γ the
/// predicate must be true or eq(γ).
class StayGraph {
 public:
  explicit StayGraph(const Tsa& m);

  const std::vector<std::string>& symbols() const { return symbols_; }
  /// Edges in transition order.
  std::vector<StayEdge> edges(const StayVertex& v) const;

 private:
  const Tsa& m_;
  std::vector<std::string> symbols_;  // @ first, then Γ in order
};

struct LoopWitness {
  std::string state;
  std::string symbol;
  Run run;  // nonempty
};

/// Absent iff m is cycle-free. Otherwise a shortest loop, ties going to the
/// lexicographically least transition sequence.
std::optional<LoopWitness> find_stay_loop(const Tsa& m);
inline bool is_cycle_free(const Tsa& m) { return !find_stay_loop(m); }

struct CycleRemoval {
  Tsa automaton;
  std::size_t iterations = 0;
  bool converged = true;
  std::optional<LoopWitness> remaining;  // set when !converged
};

/// One loop-unfolding step for `loop`: the loop body is replayed on fresh
/// child positions (under push index j) so no stay run returns to its start.
Tsa unfold_loop(const Tsa& m, const LoopWitness& loop);

/// Repeats unfold_loop on the shortest loop until m is cycle-free or
/// `max_iterations` steps were taken.
CycleRemoval remove_cycles(const Tsa& m, std::size_t max_iterations = 100);

enum class SnfVerdict { kHolds, kViolated, kInconclusive };

struct SnfCheck {
  SnfVerdict verdict = SnfVerdict::kHolds;
  std::optional<Run> witness;  // reaches a final state off the root
  Position pointer;            // pointer at the end of the witness
};

SnfCheck is_stack_normal_form_bounded(const Tsa& m, std::size_t max_len,
                                      const SearchBudget& budget);

/// Adds q_down and q_f: every old final state may step to q_down, which
/// walks down to the root and then enters q_f, the only final state.
Tsa to_stack_normal_form(const Tsa& m);

/// `base`, or `base` with the smallest numeric suffix not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace tsa
