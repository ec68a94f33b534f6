#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsa/grammar.hpp"
#include "tsa/treestack.hpp"

namespace tsa {

/// (source, read, predicate, instruction, target). An empty `read` is ε.
struct Transition {
  std::string label;
  std::string source;
  Symbol read;
  Predicate predicate;
  Instruction instruction;
  std::string target;

  bool reads_epsilon() const { return read.empty(); }
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// An automaton with tree stack storage.
struct Tsa {
  std::vector<std::string> states;
  std::set<std::string> stack_alphabet;
  std::set<Symbol> terminals;
  std::string initial_state;
  std::vector<Transition> transitions;
  std::set<std::string> final_states;

  bool is_final(const std::string& q) const { return final_states.contains(q); }
  bool has_state(const std::string& q) const;
  std::optional<std::size_t> transition_index(const std::string& label) const;
  /// Indices of transitions leaving `q`, in transition order.
  std::vector<std::size_t> outgoing(const std::string& q) const;

  friend bool operator==(const Tsa&, const Tsa&) = default;
};

/// Structural problems: undeclared states or symbols, @ in Γ, ...
std::vector<std::string> validate_automaton(const Tsa& m);

struct Configuration {
  std::string state;
  TreeStack storage;
  Word remaining;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Transition indices into Tsa::transitions.
using Run = std::vector<std::size_t>;
using CounterMap = std::map<Position, int>;

Configuration initial_configuration(const Tsa& m, Word word);

/// The successor under `t`, or std::nullopt when `t` is inapplicable.
std::optional<Configuration> step(const Configuration& c, const Transition& t);

struct ReplayFailure {
  enum class Kind { kInapplicable, kLeftoverInput };
  Kind kind;
  std::size_t step;  // index into the run; run.size() for leftover input
  std::string message;
};

struct ReplayResult {
  std::vector<Configuration> trace;  // trace.size() == run.size() + 1 if ok
  std::optional<ReplayFailure> failure;

  bool ok() const { return !failure.has_value(); }
  /// Ends in a final state with the whole word consumed.
  bool accepting(const Tsa& m) const;
};

ReplayResult replay(const Tsa& m, const Word& word, const Run& run);

struct SearchBudget {
  std::size_t max_steps = 2000;
  std::size_t max_eps_between_reads = 64;
  std::optional<int> restriction_k;
};

struct RecognizeResult {
  std::optional<Run> run;
  /// Some branch was cut by max_steps or max_eps_between_reads, so absence
  /// of a run is not a definite rejection.
  bool truncated = false;
};

/// The lexicographically least accepting run within the budget.
RecognizeResult recognize(const Tsa& m, const Word& word,
                          const SearchBudget& budget);

/// Counter map after the whole run; throws std::invalid_argument when the
/// run does not replay.
CounterMap counters(const Tsa& m, const Word& word, const Run& run);
/// Counter maps after each prefix (size run.size() + 1).
std::vector<CounterMap> counter_history(const Tsa& m, const Word& word,
                                        const Run& run);
int max_counter(const CounterMap& c);
bool check_run_restriction(const Tsa& m, const Word& word, const Run& run,
                           int k);

/// One configuration reached during bounded exploration.
struct ExploreEvent {
  std::span<const std::size_t> run;
  const Word& emitted;
  const std::string& state;
  const TreeStack& storage;
  const CounterMap& counters;
};

/// Return false to stop the exploration.
using ExploreVisitor = std::function<bool(const ExploreEvent&)>;

struct ExploreResult {
  bool truncated = false;
  bool stopped = false;
};

/// Depth-first walk over every run whose emitted word stays within
/// `max_len`, in lexicographic transition order. Each distinct
/// (state, storage, emitted word[, counters]) is expanded again only with a
/// strictly better remaining budget.
ExploreResult explore(const Tsa& m, std::size_t max_len,
                      const SearchBudget& budget, const ExploreVisitor& visit);

struct BoundedLanguage {
  std::set<Word> words;
  bool truncated = false;
};

BoundedLanguage enumerate_bounded_automaton_language(const Tsa& m,
                                                     std::size_t max_len,
                                                     const SearchBudget& budget);

struct TraceRecord {
  std::optional<std::string> transition;  // absent for the initial record
  std::string state;
  std::string storage;  // TreeStack::render()
  Position pointer;
  std::string remaining;
};

std::vector<TraceRecord> trace_records(const Tsa& m, const Run& run,
                                       const std::vector<Configuration>& trace);
std::string render_run(const Tsa& m, const Run& run);

}  // namespace tsa
