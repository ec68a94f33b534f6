#include "tsa/automaton.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace tsa {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct SearchKey {
  std::string state;
  TreeStack storage;
  Word emitted;
  CounterMap counters;  // left empty unless the search prunes by k

  friend bool operator==(const SearchKey&, const SearchKey&) = default;
};

struct SearchKeyHash {
  std::size_t operator()(const SearchKey& k) const {
    std::size_t h = std::hash<std::string>{}(k.state);
    h = mix(h, k.storage.hash());
    for (const auto& s : k.emitted) h = mix(h, std::hash<std::string>{}(s));
    for (const auto& [pos, n] : k.counters) {
      for (int i : pos) h = mix(h, static_cast<std::size_t>(i));
      h = mix(h, static_cast<std::size_t>(n) + 101);
    }
    return h;
  }
};

/// Shared depth-first engine behind recognize() and explore().
class RunSearch {
 public:
  RunSearch(const Tsa& m, const SearchBudget& budget, const Word* input,
            std::size_t max_len, const ExploreVisitor& visit)
      : m_(m), budget_(budget), input_(input), max_len_(max_len), visit_(visit) {
    for (std::size_t i = 0; i < m.transitions.size(); ++i)
      outgoing_[m.transitions[i].source].push_back(i);
  }

  ExploreResult run() {
    ExploreResult result;
    stopped_ = !expand(m_.initial_state, TreeStack(), CounterMap{}, 0, 0);
    result.truncated = truncated_;
    result.stopped = stopped_;
    return result;
  }

 private:
  /// Returns false when the visitor asked to stop.
  bool expand(const std::string& state, const TreeStack& storage,
              const CounterMap& counters, std::size_t steps,
              std::size_t eps_streak) {
    SearchKey key{state, storage, emitted_,
                  budget_.restriction_k ? counters : CounterMap{}};
    auto& seen = visited_[std::move(key)];
    for (const auto& [s, e] : seen)
      if (s <= steps && e <= eps_streak) return true;
    std::erase_if(seen, [&](const auto& se) {
      return steps <= se.first && eps_streak <= se.second;
    });
    seen.emplace_back(steps, eps_streak);

    if (!visit_(ExploreEvent{path_, emitted_, state, storage, counters}))
      return false;

    auto it = outgoing_.find(state);
    if (it == outgoing_.end()) return true;
    for (std::size_t index : it->second) {
      const Transition& t = m_.transitions[index];
      if (!t.reads_epsilon()) {
        if (input_) {
          if (emitted_.size() >= input_->size() ||
              (*input_)[emitted_.size()] != t.read)
            continue;
        } else if (emitted_.size() >= max_len_) {
          continue;
        }
      }
      if (!storage.satisfies(t.predicate)) continue;
      auto next = storage.apply(t.instruction);
      if (!next) continue;

      CounterMap next_counters;
      const CounterMap* counters_ref = &counters;
      if (moves_up(t.instruction)) {
        next_counters = counters;
        const int value = ++next_counters[next->pointer()];
        if (budget_.restriction_k && value > *budget_.restriction_k) continue;
        counters_ref = &next_counters;
      }
      if (steps >= budget_.max_steps ||
          (t.reads_epsilon() && eps_streak >= budget_.max_eps_between_reads)) {
        truncated_ = true;
        continue;
      }

      path_.push_back(index);
      if (!t.reads_epsilon()) emitted_.push_back(t.read);
      const bool go_on = expand(t.target, *next, *counters_ref, steps + 1,
                                t.reads_epsilon() ? eps_streak + 1 : 0);
      if (!t.reads_epsilon()) emitted_.pop_back();
      path_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  const Tsa& m_;
  const SearchBudget& budget_;
  const Word* input_;
  std::size_t max_len_;
  const ExploreVisitor& visit_;
  std::unordered_map<std::string, std::vector<std::size_t>> outgoing_;
  std::unordered_map<SearchKey, std::vector<std::pair<std::size_t, std::size_t>>,
                     SearchKeyHash>
      visited_;
  Run path_;
  Word emitted_;
  bool truncated_ = false;
  bool stopped_ = false;
};

}  // namespace

bool Tsa::has_state(const std::string& q) const {
  return std::find(states.begin(), states.end(), q) != states.end();
}

std::optional<std::size_t> Tsa::transition_index(const std::string& label) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].label == label) return i;
  return std::nullopt;
}

std::vector<std::size_t> Tsa::outgoing(const std::string& q) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].source == q) out.push_back(i);
  return out;
}

std::vector<std::string> validate_automaton(const Tsa& m) {
  std::vector<std::string> out;
  std::set<std::string> states(m.states.begin(), m.states.end());
  if (states.size() != m.states.size()) out.push_back("duplicate state");
  if (!states.contains(m.initial_state))
    out.push_back("undeclared initial state " + m.initial_state);
  for (const auto& q : m.final_states)
    if (!states.contains(q)) out.push_back("undeclared final state " + q);
  if (m.stack_alphabet.contains(kRootSymbol))
    out.push_back("@ must not be part of the stack alphabet");

  std::set<std::string> labels;
  auto check_symbol = [&](const std::string& label, const std::string& sym) {
    if (!m.stack_alphabet.contains(sym))
      out.push_back("transition " + label + ": undeclared stack symbol " + sym);
  };
  for (const auto& t : m.transitions) {
    if (!labels.insert(t.label).second)
      out.push_back("duplicate transition label " + t.label);
    if (!states.contains(t.source))
      out.push_back("transition " + t.label + ": undeclared state " + t.source);
    if (!states.contains(t.target))
      out.push_back("transition " + t.label + ": undeclared state " + t.target);
    if (!t.reads_epsilon() && !m.terminals.contains(t.read))
      out.push_back("transition " + t.label + ": undeclared terminal " + t.read);
    if (const auto* eq = std::get_if<pred::Equals>(&t.predicate))
      check_symbol(t.label, eq->symbol);
    if (const auto* push = std::get_if<instr::Push>(&t.instruction)) {
      check_symbol(t.label, push->symbol);
      if (push->child < 1) out.push_back("transition " + t.label + ": child index < 1");
    }
    if (const auto* up = std::get_if<instr::Up>(&t.instruction))
      if (up->child < 1) out.push_back("transition " + t.label + ": child index < 1");
    if (const auto* set = std::get_if<instr::Set>(&t.instruction))
      check_symbol(t.label, set->symbol);
  }
  return out;
}

Configuration initial_configuration(const Tsa& m, Word word) {
  return Configuration{m.initial_state, TreeStack(), std::move(word)};
}

std::optional<Configuration> step(const Configuration& c, const Transition& t) {
  if (c.state != t.source) return std::nullopt;
  if (!t.reads_epsilon() && (c.remaining.empty() || c.remaining.front() != t.read))
    return std::nullopt;
  if (!c.storage.satisfies(t.predicate)) return std::nullopt;
  auto next = c.storage.apply(t.instruction);
  if (!next) return std::nullopt;
  Word rest(c.remaining.begin() + (t.reads_epsilon() ? 0 : 1), c.remaining.end());
  return Configuration{t.target, std::move(*next), std::move(rest)};
}

bool ReplayResult::accepting(const Tsa& m) const {
  return ok() && !trace.empty() && m.is_final(trace.back().state) &&
         trace.back().remaining.empty();
}

ReplayResult replay(const Tsa& m, const Word& word, const Run& run) {
  ReplayResult result;
  result.trace.push_back(initial_configuration(m, word));
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run[i] >= m.transitions.size()) {
      result.failure = ReplayFailure{ReplayFailure::Kind::kInapplicable, i,
                                     "unknown transition index"};
      return result;
    }
    const Transition& t = m.transitions[run[i]];
    auto next = step(result.trace.back(), t);
    if (!next) {
      result.failure = ReplayFailure{ReplayFailure::Kind::kInapplicable, i,
                                     "transition " + t.label + " is inapplicable"};
      return result;
    }
    result.trace.push_back(std::move(*next));
  }
  if (!result.trace.back().remaining.empty()) {
    result.failure = ReplayFailure{ReplayFailure::Kind::kLeftoverInput, run.size(),
                                   "input left over: " +
                                       render_word(result.trace.back().remaining)};
  }
  return result;
}

RecognizeResult recognize(const Tsa& m, const Word& word,
                          const SearchBudget& budget) {
  RecognizeResult result;
  ExploreVisitor visit = [&](const ExploreEvent& e) {
    if (m.is_final(e.state) && e.emitted.size() == word.size()) {
      result.run = Run(e.run.begin(), e.run.end());
      return false;
    }
    return true;
  };
  RunSearch search(m, budget, &word, word.size(), visit);
  result.truncated = search.run().truncated;
  return result;
}

std::vector<CounterMap> counter_history(const Tsa& m, const Word& word,
                                        const Run& run) {
  const ReplayResult r = replay(m, word, run);
  if (!r.ok()) throw std::invalid_argument(r.failure->message);
  std::vector<CounterMap> history{CounterMap{}};
  for (std::size_t i = 0; i < run.size(); ++i) {
    CounterMap next = history.back();
    if (moves_up(m.transitions[run[i]].instruction))
      ++next[r.trace[i + 1].storage.pointer()];
    history.push_back(std::move(next));
  }
  return history;
}

CounterMap counters(const Tsa& m, const Word& word, const Run& run) {
  return counter_history(m, word, run).back();
}

int max_counter(const CounterMap& c) {
  int best = 0;
  for (const auto& [pos, n] : c) best = std::max(best, n);
  return best;
}

bool check_run_restriction(const Tsa& m, const Word& word, const Run& run, int k) {
  // counters only grow, so the final map bounds every prefix
  return max_counter(counters(m, word, run)) <= k;
}

ExploreResult explore(const Tsa& m, std::size_t max_len,
                      const SearchBudget& budget, const ExploreVisitor& visit) {
  RunSearch search(m, budget, nullptr, max_len, visit);
  return search.run();
}

BoundedLanguage enumerate_bounded_automaton_language(const Tsa& m,
                                                     std::size_t max_len,
                                                     const SearchBudget& budget) {
  BoundedLanguage out;
  const auto r = explore(m, max_len, budget, [&](const ExploreEvent& e) {
    if (m.is_final(e.state)) out.words.insert(e.emitted);
    return true;
  });
  out.truncated = r.truncated;
  return out;
}

std::vector<TraceRecord> trace_records(const Tsa& m, const Run& run,
                                       const std::vector<Configuration>& trace) {
  std::vector<TraceRecord> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    TraceRecord rec;
    if (i > 0 && i - 1 < run.size()) rec.transition = m.transitions[run[i - 1]].label;
    rec.state = trace[i].state;
    rec.storage = trace[i].storage.render();
    rec.pointer = trace[i].storage.pointer();
    rec.remaining = render_word(trace[i].remaining, "", "");
    out.push_back(std::move(rec));
  }
  return out;
}

std::string render_run(const Tsa& m, const Run& run) {
  std::string out;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (i) out += ' ';
    out += m.transitions.at(run[i]).label;
  }
  return out;
}

}  // namespace tsa
