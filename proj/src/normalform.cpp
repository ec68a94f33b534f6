#include "tsa/normalform.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tsa {

StayGraph::StayGraph(const Tsa& m) : m_(m) {
  symbols_.push_back(kRootSymbol);
  symbols_.insert(symbols_.end(), m.stack_alphabet.begin(), m.stack_alphabet.end());
}

std::vector<StayEdge> StayGraph::edges(const StayVertex& v) const {
  std::vector<StayEdge> out;
  const auto& [state, symbol] = v;
  for (std::size_t i = 0; i < m_.transitions.size(); ++i) {
    const Transition& t = m_.transitions[i];
    if (t.source != state || !is_stay(t.instruction)) continue;
    if (!predicate_admits(t.predicate, symbol)) continue;
    if (const auto* set = std::get_if<instr::Set>(&t.instruction)) {
      if (symbol == kRootSymbol) continue;
      out.push_back({i, {t.target, set->symbol}});
    } else {
      out.push_back({i, {t.target, symbol}});
    }
  }
  return out;
}

std::optional<LoopWitness> find_stay_loop(const Tsa& m) {
  const StayGraph graph(m);
  std::optional<LoopWitness> best;
  for (const auto& state : m.states) {
    for (const auto& symbol : graph.symbols()) {
      const StayVertex start{state, symbol};
      // breadth-first in transition order: the first path found to each
      // vertex is the lexicographically least among the shortest ones
      std::map<StayVertex, Run> path;
      std::deque<StayVertex> queue{start};
      path[start] = {};
      std::optional<Run> loop;
      while (!queue.empty() && !loop) {
        const StayVertex v = queue.front();
        queue.pop_front();
        if (best && path[v].size() + 1 > best->run.size()) break;
        for (const auto& e : graph.edges(v)) {
          Run next = path[v];
          next.push_back(e.transition);
          if (e.target == start) {
            loop = std::move(next);
            break;
          }
          if (path.emplace(e.target, next).second) queue.push_back(e.target);
        }
      }
      if (loop && (!best || loop->size() < best->run.size() ||
                   (loop->size() == best->run.size() && *loop < best->run)))
        best = LoopWitness{state, symbol, std::move(*loop)};
    }
  }
  return best;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.contains(base)) return base;
  for (int n = 1;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!taken.contains(candidate)) return candidate;
  }
}

namespace {

int max_child_index(const Tsa& m) {
  int j = 0;
  for (const auto& t : m.transitions) {
    if (const auto* push = std::get_if<instr::Push>(&t.instruction))
      j = std::max(j, push->child);
    if (const auto* up = std::get_if<instr::Up>(&t.instruction))
      j = std::max(j, up->child);
  }
  return j;
}

}  // namespace

Tsa unfold_loop(const Tsa& m, const LoopWitness& loop) {
  const std::size_t n = loop.run.size();
  const Transition last = m.transitions[loop.run.back()];
  const std::string q = loop.state;

  std::set<std::string> taken_states(m.states.begin(), m.states.end());
  auto new_state = [&](const std::string& base) {
    std::string name = fresh_name(base, taken_states);
    taken_states.insert(name);
    return name;
  };
  std::vector<std::string> primed;  // q′₀ … q′ₙ₋₁
  for (std::size_t i = 0; i < n; ++i)
    primed.push_back(new_state(q + "'" + std::to_string(i)));
  const std::string q_up = new_state(q + "^up");
  const std::string q_down = new_state(q + "^down");
  const std::string q_tilde = new_state(q + "~");

  std::set<std::string> taken_symbols = m.stack_alphabet;
  taken_symbols.insert(kRootSymbol);
  const std::string star = fresh_name("*", taken_symbols);
  taken_symbols.insert(star);
  const std::string hash = fresh_name("#", taken_symbols);
  const int j = max_child_index(m) + 1;

  std::set<std::string> labels;
  for (const auto& t : m.transitions) labels.insert(t.label);
  auto label = [&](const std::string& base) {
    std::string name = fresh_name(base, labels);
    labels.insert(name);
    return name;
  };

  Tsa out = m;
  out.states.insert(out.states.end(), primed.begin(), primed.end());
  out.states.insert(out.states.end(), {q_up, q_down, q_tilde});
  out.stack_alphabet.insert({star, hash});
  if (m.is_final(q)) out.final_states.insert(q_tilde);

  out.transitions.clear();
  for (std::size_t i = 0; i < m.transitions.size(); ++i)
    if (i != loop.run.back()) out.transitions.push_back(m.transitions[i]);
  // q̃₀ behaves like q₀ except that it cannot start the loop again
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    if (t.source != q || i == loop.run.front()) continue;
    Transition copy = t;
    copy.label = label(t.label + "~");
    copy.source = q_tilde;
    out.transitions.push_back(std::move(copy));
  }
  Transition closing = last;
  closing.label = label(last.label + "~");
  closing.target = q_tilde;
  out.transitions.push_back(std::move(closing));

  auto add = [&](const std::string& base, const std::string& src, Symbol read,
                 Predicate p, Instruction f, const std::string& tgt) {
    out.transitions.push_back(
        Transition{label(base), src, std::move(read), std::move(p), std::move(f), tgt});
  };
  add(q + "^push", q, "", pred::True{}, instr::Push{j, hash}, q_up);
  add(q + "^iter", q_up, "", pred::True{}, instr::Push{j, star}, primed[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const Transition& t = m.transitions[loop.run[i]];
    add(q + "^body" + std::to_string(i + 1), primed[i], t.read, pred::True{},
        instr::Id{}, i + 1 < n ? primed[i + 1] : q_up);
  }
  add(q + "^stop", q_up, "", pred::True{}, instr::Id{}, q_down);
  add(q + "^down", q_down, "", pred::Equals{star}, instr::Down{}, q_down);
  add(q + "^return", q_down, "", pred::Equals{hash}, instr::Down{}, q);
  return out;
}

CycleRemoval remove_cycles(const Tsa& m, std::size_t max_iterations) {
  CycleRemoval result{m, 0, true, std::nullopt};
  while (auto loop = find_stay_loop(result.automaton)) {
    if (result.iterations >= max_iterations) {
      result.converged = false;
      result.remaining = std::move(loop);
      break;
    }
    result.automaton = unfold_loop(result.automaton, *loop);
    ++result.iterations;
  }
  return result;
}

SnfCheck is_stack_normal_form_bounded(const Tsa& m, std::size_t max_len,
                                      const SearchBudget& budget) {
  SnfCheck check;
  const auto r = explore(m, max_len, budget, [&](const ExploreEvent& e) {
    if (m.is_final(e.state) && !e.storage.pointer().empty()) {
      check.verdict = SnfVerdict::kViolated;
      check.witness = Run(e.run.begin(), e.run.end());
      check.pointer = e.storage.pointer();
      return false;
    }
    return true;
  });
  if (check.verdict != SnfVerdict::kViolated && r.truncated)
    check.verdict = SnfVerdict::kInconclusive;
  return check;
}

Tsa to_stack_normal_form(const Tsa& m) {
  std::set<std::string> taken(m.states.begin(), m.states.end());
  const std::string q_down = fresh_name("q_down", taken);
  taken.insert(q_down);
  const std::string q_f = fresh_name("q_f", taken);

  std::set<std::string> labels;
  for (const auto& t : m.transitions) labels.insert(t.label);
  auto label = [&](const std::string& base) {
    std::string name = fresh_name(base, labels);
    labels.insert(name);
    return name;
  };

  Tsa out = m;
  out.states.push_back(q_down);
  out.states.push_back(q_f);
  for (const auto& q : m.states)
    if (m.is_final(q))
      out.transitions.push_back(
          Transition{label("accept_" + q), q, "", pred::True{}, instr::Id{}, q_down});
  out.transitions.push_back(
      Transition{label("descend"), q_down, "", pred::True{}, instr::Down{}, q_down});
  out.transitions.push_back(
      Transition{label("finish"), q_down, "", pred::Bottom{}, instr::Id{}, q_f});
  out.final_states = {q_f};
  return out;
}

}  // namespace tsa
