#include "tsa/a2g.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

namespace tsa {

std::string TypedNonterminal::render() const {
  std::string out = "⟨";
  for (std::size_t i = 0; i < states.size(); ++i) out += (i ? "," : "") + states[i];
  out += ";";
  for (std::size_t i = 0; i < symbols.size(); ++i) out += (i ? "," : "") + symbols[i];
  return out + "⟩";
}

namespace {

void require_cycle_free(const Tsa& m) {
  if (auto loop = find_stay_loop(m))
    throw std::invalid_argument("automaton has a stay loop at (" + loop->state + ", " +
                                loop->symbol + "): " + render_run(m, loop->run));
}

int child_of(const Instruction& f) {
  if (const auto* push = std::get_if<instr::Push>(&f)) return push->child;
  return std::get<instr::Up>(f).child;
}

/// Per-child entry bookkeeping shared by all tuples of one sequence.
struct Ledger {
  struct Entry {
    int count = 0;
    std::string last_exit;  // β′ of the latest excursion
  };
  bool strict = true;  // sequence rules; otherwise only the k cap applies
  int k = 1;
  std::map<int, Entry> children;
};

/// Over-approximation of node-local reachability: (q, γ) → (q′, γ′) when
/// some run starts at a node in state q with γ there and comes back to
/// that node in state q′ with γ′, child excursions included. Children
/// entered by up may carry any symbol. Used only to cut dead branches, so
/// the approximation never drops a real run.
class Reach {
 public:
  explicit Reach(const Tsa& m) : m_(m) {
    symbols_.push_back(kRootSymbol);
    symbols_.insert(symbols_.end(), m.stack_alphabet.begin(), m.stack_alphabet.end());
    for (std::size_t i = 0; i < symbols_.size(); ++i) symbol_index_[symbols_[i]] = i;
    for (std::size_t i = 0; i < m.states.size(); ++i) state_index_[m.states[i]] = i;
    n_ = m.states.size() * symbols_.size();
    words_ = (n_ + 63) / 64;
    bits_.assign(n_ * words_, 0);
    compute();
  }

  bool reaches(const std::string& q, const std::string& gamma, const std::string& q2,
               const std::string& gamma2) const {
    const auto a = vertex(q, gamma), b = vertex(q2, gamma2);
    return a && b && test(*a, *b);
  }

  /// Some child symbol β lets (q, β) reach (q2, γ2).
  bool reaches_from_any(const std::string& q, const std::string& q2,
                        const std::string& gamma2) const {
    for (std::size_t b = 1; b < symbols_.size(); ++b)
      if (reaches(q, symbols_[b], q2, gamma2)) return true;
    return false;
  }

 private:
  std::optional<std::size_t> vertex(const std::string& q, const std::string& gamma) const {
    auto s = state_index_.find(q);
    auto g = symbol_index_.find(gamma);
    if (s == state_index_.end() || g == symbol_index_.end()) return std::nullopt;
    return s->second * symbols_.size() + g->second;
  }
  bool test(std::size_t a, std::size_t b) const {
    return bits_[a * words_ + b / 64] >> (b % 64) & 1u;
  }
  bool set(std::size_t a, std::size_t b) {
    auto& w = bits_[a * words_ + b / 64];
    const std::uint64_t mask = std::uint64_t{1} << (b % 64);
    if (w & mask) return false;
    w |= mask;
    return true;
  }

  // states a parent resumes in after a child entered at vertex c returns
  std::set<std::string> returns(std::size_t c) const {
    std::set<std::string> out;
    for (std::size_t w = 0; w < n_; ++w) {
      if (!test(c, w)) continue;
      const std::string& q = m_.states[w / symbols_.size()];
      const std::string& beta = symbols_[w % symbols_.size()];
      if (beta == kRootSymbol) continue;
      for (const auto& t : m_.transitions)
        if (t.source == q && std::holds_alternative<instr::Down>(t.instruction) &&
            predicate_admits(t.predicate, beta))
          out.insert(t.target);
    }
    return out;
  }

  void compute() {
    for (std::size_t v = 0; v < n_; ++v) set(v, v);
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::set<std::string>> ret(n_);
      for (std::size_t c = 0; c < n_; ++c) ret[c] = returns(c);
      for (std::size_t v = 0; v < n_; ++v) {
        std::vector<std::size_t> work;
        for (std::size_t u = 0; u < n_; ++u)
          if (test(v, u)) work.push_back(u);
        while (!work.empty()) {
          const std::size_t u = work.back();
          work.pop_back();
          const std::string& q = m_.states[u / symbols_.size()];
          const std::string& gamma = symbols_[u % symbols_.size()];
          auto add = [&](const std::string& q2, const std::string& g2) {
            const std::size_t w = *vertex(q2, g2);
            if (set(v, w)) {
              changed = true;
              work.push_back(w);
            }
          };
          for (const auto& t : m_.transitions) {
            if (t.source != q || !predicate_admits(t.predicate, gamma)) continue;
            if (std::holds_alternative<instr::Id>(t.instruction)) {
              add(t.target, gamma);
            } else if (const auto* set_to = std::get_if<instr::Set>(&t.instruction)) {
              if (gamma != kRootSymbol) add(t.target, set_to->symbol);
            } else if (const auto* push = std::get_if<instr::Push>(&t.instruction)) {
              for (const auto& r : ret[*vertex(t.target, push->symbol)]) add(r, gamma);
            } else if (std::holds_alternative<instr::Up>(t.instruction)) {
              for (std::size_t b = 1; b < symbols_.size(); ++b)
                for (const auto& r : ret[*vertex(t.target, symbols_[b])]) add(r, gamma);
            }
          }
        }
      }
    }
  }

  const Tsa& m_;
  std::vector<std::string> symbols_;
  std::map<std::string, std::size_t> symbol_index_, state_index_;
  std::size_t n_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Depth-first enumeration of the parent-node activity of one tuple.
/// Stay edges are taken directly; a push or up opens a gap, which is
/// closed by any down transition whose predicate admits the chosen β′.
class ParentWalk {
 public:
  using Emit = std::function<void(SegmentTuple&&)>;

  explicit ParentWalk(const Tsa& m) : m_(m), reach_(m) {
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      const Transition& t = m.transitions[i];
      outgoing_[t.source].push_back(i);
      if (std::holds_alternative<instr::Down>(t.instruction)) downs_.push_back(i);
    }
  }

  /// Ends only where (state, symbol) matches `target` when one is given,
  /// anywhere otherwise.
  void run(const std::string& state, const std::string& symbol,
           const std::optional<std::pair<std::string, std::string>>& target,
           Ledger& ledger, const Emit& emit) {
    target_ = target;
    ledger_ = &ledger;
    emit_ = &emit;
    done_.clear();
    from_ = {state, symbol};
    Segment cur;
    cur.kind = SegmentKind::kStay;
    cur.parent_from = symbol;
    cur.entry_state = state;
    on_path_.clear();
    walk(state, symbol, cur);
  }

 private:
  void walk(const std::string& state, const std::string& symbol, Segment& cur) {
    const StayVertex here{state, symbol};
    if (target_ && !reach_.reaches(state, symbol, target_->first, target_->second)) return;
    if (!on_path_.insert(here).second)
      throw std::invalid_argument("automaton has a stay loop through state " + state);

    if (!target_ || (target_->first == state && target_->second == symbol)) {
      SegmentTuple tuple;
      tuple.segments = done_;
      Segment last = cur;
      last.parent_to = symbol;
      last.exit_state = state;
      tuple.segments.push_back(std::move(last));
      for (std::size_t i = 1; i < tuple.segments.size(); ++i) {
        const Segment& a = tuple.segments[i - 1];
        const Segment& b = tuple.segments[i];
        tuple.gaps.push_back(Gap{a.exit_state, b.entry_state, *a.child_index,
                                 a.ends_with_push ? a.child_to : std::nullopt,
                                 *b.child_from});
      }
      tuple.type = TupleType{from_.first, state, from_.second, symbol};
      (*emit_)(std::move(tuple));
    }

    auto it = outgoing_.find(state);
    if (it != outgoing_.end()) {
      for (std::size_t index : it->second) {
        const Transition& t = m_.transitions[index];
        if (!predicate_admits(t.predicate, symbol)) continue;
        if (is_stay(t.instruction)) {
          std::string next_symbol = symbol;
          if (const auto* set = std::get_if<instr::Set>(&t.instruction)) {
            if (symbol == kRootSymbol) continue;
            next_symbol = set->symbol;
          }
          cur.run.push_back(index);
          walk(t.target, next_symbol, cur);
          cur.run.pop_back();
        } else if (moves_up(t.instruction)) {
          enter_child(index, symbol, cur);
        }
      }
    }
    on_path_.erase(here);
  }

  void enter_child(std::size_t index, const std::string& symbol, Segment& cur) {
    const Transition& t = m_.transitions[index];
    const int j = child_of(t.instruction);
    const auto* push = std::get_if<instr::Push>(&t.instruction);
    Ledger::Entry& entry = ledger_->children[j];
    if (entry.count >= ledger_->k) return;
    if (ledger_->strict && (push != nullptr) != (entry.count == 0)) return;

    Segment closed = cur;
    closed.kind = cur.kind == SegmentKind::kStay ? SegmentKind::kUp : SegmentKind::kDownUp;
    closed.run.push_back(index);
    closed.parent_to = symbol;
    closed.child_index = j;
    closed.ends_with_push = push != nullptr;
    if (push)
      closed.child_to = push->symbol;
    else if (ledger_->strict)
      closed.child_to = entry.last_exit;
    closed.exit_state = t.target;

    const Ledger::Entry saved = entry;
    const std::optional<std::string> entered = closed.child_to;
    done_.push_back(std::move(closed));
    std::set<StayVertex> outer_path;
    outer_path.swap(on_path_);
    for (std::size_t d : downs_) {
      const Transition& down = m_.transitions[d];
      for (const auto& beta : m_.stack_alphabet) {
        if (!predicate_admits(down.predicate, beta)) continue;
        const bool feasible =
            entered ? reach_.reaches(t.target, *entered, down.source, beta)
                : reach_.reaches_from_any(t.target, down.source, beta);
        if (!feasible) continue;
        Segment next;
        next.kind = SegmentKind::kDown;
        next.run = {d};
        next.parent_from = symbol;
        next.child_from = beta;
        next.entry_state = down.source;
        entry.count = saved.count + 1;
        entry.last_exit = beta;
        walk(down.target, symbol, next);
      }
    }
    on_path_.swap(outer_path);
    entry = saved;
    if (entry.count == 0) ledger_->children.erase(j);
    done_.pop_back();
  }

  const Tsa& m_;
  Reach reach_;
  std::map<std::string, std::vector<std::size_t>> outgoing_;
  std::vector<std::size_t> downs_;

  std::optional<std::pair<std::string, std::string>> target_;
  Ledger* ledger_ = nullptr;
  const Emit* emit_ = nullptr;
  std::vector<Segment> done_;
  std::pair<std::string, std::string> from_;
  std::set<StayVertex> on_path_;  // stay vertices of the current segment
};

std::vector<std::string> parent_symbols(const Tsa& m) {
  std::vector<std::string> out{kRootSymbol};
  out.insert(out.end(), m.stack_alphabet.begin(), m.stack_alphabet.end());
  return out;
}

void collect_stays(const Tsa& m, const StayGraph& graph, const StayVertex& v,
                   std::set<StayVertex>& path, Run& run,
                   const std::function<void(const StayVertex&, const Run&)>& visit) {
  if (!path.insert(v).second)
    throw std::invalid_argument("automaton has a stay loop through state " + v.first);
  visit(v, run);
  for (const auto& e : graph.edges(v)) {
    run.push_back(e.transition);
    collect_stays(m, graph, e.target, path, run, visit);
    run.pop_back();
  }
  path.erase(v);
}

}  // namespace

std::vector<Run> stay_runs(const Tsa& m, const std::string& q, const std::string& q2,
                           const std::string& gamma, const std::string& gamma2) {
  const StayGraph graph(m);
  std::vector<Run> out;
  std::set<StayVertex> path;
  Run run;
  collect_stays(m, graph, {q, gamma}, path, run, [&](const StayVertex& v, const Run& r) {
    if (v.first == q2 && v.second == gamma2) out.push_back(r);
  });
  return out;
}

std::vector<Segment> enumerate_segments(const Tsa& m) {
  require_cycle_free(m);
  const StayGraph graph(m);
  const auto symbols = parent_symbols(m);
  std::vector<Segment> out;

  // from (state, symbol) after an optional leading down transition
  auto from = [&](const std::string& state, const std::string& symbol,
                  const Segment& prefix) {
    std::set<StayVertex> path;
    Run run = prefix.run;
    collect_stays(m, graph, {state, symbol}, path, run,
                  [&](const StayVertex& v, const Run& r) {
                    const bool after_down = !prefix.run.empty();
                    if (after_down || !r.empty()) {
                      Segment s = prefix;
                      s.kind = after_down ? SegmentKind::kDown : SegmentKind::kStay;
                      s.run = r;
                      s.parent_to = v.second;
                      s.exit_state = v.first;
                      out.push_back(std::move(s));
                    }
                    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
                      const Transition& t = m.transitions[i];
                      if (t.source != v.first || !moves_up(t.instruction) ||
                          !predicate_admits(t.predicate, v.second))
                        continue;
                      Segment s = prefix;
                      s.kind = after_down ? SegmentKind::kDownUp : SegmentKind::kUp;
                      s.run = r;
                      s.run.push_back(i);
                      s.parent_to = v.second;
                      s.child_index = child_of(t.instruction);
                      if (const auto* push = std::get_if<instr::Push>(&t.instruction)) {
                        s.child_to = push->symbol;
                        s.ends_with_push = true;
                      }
                      s.exit_state = t.target;
                      out.push_back(std::move(s));
                    }
                  });
  };

  for (const auto& q : m.states)
    for (const auto& gamma : symbols) {
      Segment prefix;
      prefix.parent_from = gamma;
      prefix.entry_state = q;
      from(q, gamma, prefix);
    }
  for (std::size_t d = 0; d < m.transitions.size(); ++d) {
    const Transition& down = m.transitions[d];
    if (!std::holds_alternative<instr::Down>(down.instruction)) continue;
    for (const auto& beta : m.stack_alphabet) {
      if (!predicate_admits(down.predicate, beta)) continue;
      for (const auto& gamma : symbols) {
        Segment prefix;
        prefix.run = {d};
        prefix.parent_from = gamma;
        prefix.child_from = beta;
        prefix.entry_state = down.source;
        from(down.target, gamma, prefix);
      }
    }
  }
  return out;
}

std::vector<SegmentTuple> admissible_tuples(const Tsa& m, int k) {
  require_cycle_free(m);
  std::vector<SegmentTuple> out;
  ParentWalk walk(m);
  const ParentWalk::Emit emit = [&](SegmentTuple&& t) { out.push_back(std::move(t)); };
  for (const auto& q : m.states)
    for (const auto& gamma : parent_symbols(m)) {
      Ledger ledger{false, k, {}};
      walk.run(q, gamma, std::nullopt, ledger, emit);
    }
  return out;
}

std::variant<SegmentSequence, std::string> check_sequence(const std::vector<SegmentTuple>& t,
                                                          int k) {
  SegmentSequence seq;
  seq.tuples = t;
  if (t.empty()) return std::string("empty sequence");
  seq.lhs.symbols.push_back(t.front().type.from_symbol);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i && t[i].type.from_symbol != t[i - 1].type.to_symbol)
      return "parent symbols do not chain between tuples " + std::to_string(i) + " and " +
             std::to_string(i + 1);
    if (t[i].gaps.size() + 1 != t[i].segments.size())
      return "tuple " + std::to_string(i + 1) + " has a gap count mismatch";
    seq.lhs.states.push_back(t[i].type.from_state);
    seq.lhs.states.push_back(t[i].type.to_state);
    seq.lhs.symbols.push_back(t[i].type.to_symbol);
  }

  std::map<int, int> number;  // child index j → φ
  std::vector<std::vector<const Gap*>> occurrences;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t g = 0; g < t[i].gaps.size(); ++g) {
      const Gap& gap = t[i].gaps[g];
      auto [it, fresh] = number.emplace(gap.child, static_cast<int>(number.size()) + 1);
      if (fresh) occurrences.emplace_back();
      auto& occ = occurrences[it->second - 1];
      const bool push = t[i].segments[g].ends_with_push;
      if (occ.empty() && !push)
        return "first entry into child " + std::to_string(gap.child) + " is not a push";
      if (!occ.empty() && push)
        return "child " + std::to_string(gap.child) + " is pushed twice";
      if (!occ.empty()) {
        const auto& entered = t[i].segments[g].child_to;
        if (entered && *entered != occ.back()->child_exit)
          return "child " + std::to_string(gap.child) +
                 " is re-entered with a symbol it was not left with";
      }
      occ.push_back(&gap);
      if (static_cast<int>(occ.size()) > k)
        return "child " + std::to_string(gap.child) + " is entered more than k times";
      seq.child_map[{static_cast<int>(i) + 1, static_cast<int>(g) + 1}] = {
          it->second, static_cast<int>(occ.size())};
    }
  }
  seq.distinct_children = static_cast<int>(occurrences.size());
  for (const auto& occ : occurrences) {
    TypedNonterminal b;
    b.symbols.push_back(*occ.front()->pushed);
    for (const Gap* gap : occ) {
      b.states.push_back(gap->exit_state);
      b.states.push_back(gap->entry_state);
      b.symbols.push_back(gap->child_exit);
    }
    seq.rhs.push_back(std::move(b));
  }
  return seq;
}

namespace {

std::vector<SegmentSequence> sequences_of_type(const Tsa& m, ParentWalk& walk, int k,
                                               const TypedNonterminal& lhs) {
  std::vector<SegmentSequence> out;
  const std::size_t s = lhs.fan_out();
  if (s == 0 || lhs.states.size() != 2 * s) return out;
  Ledger ledger{true, k, {}};
  std::vector<SegmentTuple> chosen;

  std::function<void(std::size_t)> next = [&](std::size_t i) {
    if (i == s) {
      auto checked = check_sequence(chosen, k);
      if (auto* seq = std::get_if<SegmentSequence>(&checked))
        out.push_back(std::move(*seq));
      else
        throw std::logic_error("walk produced an inadmissible sequence: " +
                               std::get<std::string>(checked));
      return;
    }
    // the walk object is reused for the next tuple, so take copies first
    std::vector<std::pair<SegmentTuple, Ledger>> found;
    const ParentWalk::Emit emit = [&](SegmentTuple&& t) {
      found.emplace_back(std::move(t), ledger);
    };
    walk.run(lhs.states[2 * i], lhs.symbols[i],
             std::make_pair(lhs.states[2 * i + 1], lhs.symbols[i + 1]), ledger, emit);
    const Ledger saved = ledger;
    for (auto& [tuple, after] : found) {
      ledger = after;
      chosen.push_back(std::move(tuple));
      next(i + 1);
      chosen.pop_back();
    }
    ledger = saved;
  };
  next(0);
  return out;
}

std::vector<TypedNonterminal> initial_types(const Tsa& m) {
  std::vector<TypedNonterminal> out;
  for (const auto& q : m.states)
    if (m.is_final(q))
      out.push_back(TypedNonterminal{{m.initial_state, q}, {kRootSymbol, kRootSymbol}});
  return out;
}

/// Worklist over types reachable from the initial ones.
template <typename Visit>
void for_each_reachable_sequence(const Tsa& m, int k, Visit visit) {
  ParentWalk walk(m);
  std::set<TypedNonterminal> seen;
  std::deque<TypedNonterminal> work;
  for (auto& a : initial_types(m))
    if (seen.insert(a).second) work.push_back(a);
  while (!work.empty()) {
    const TypedNonterminal a = work.front();
    work.pop_front();
    for (auto& seq : sequences_of_type(m, walk, k, a)) {
      for (const auto& b : seq.rhs)
        if (seen.insert(b).second) work.push_back(b);
      visit(std::move(seq));
    }
  }
}

}  // namespace

std::vector<SegmentSequence> admissible_sequences(const Tsa& m, int k,
                                                  const TypedNonterminal& lhs) {
  require_cycle_free(m);
  ParentWalk walk(m);
  return sequences_of_type(m, walk, k, lhs);
}

std::vector<SegmentSequence> admissible_sequences(const Tsa& m, int k) {
  require_cycle_free(m);
  std::vector<SegmentSequence> out;
  for_each_reachable_sequence(m, k, [&](SegmentSequence&& s) { out.push_back(std::move(s)); });
  return out;
}

Rule sequence_rule(const Tsa& m, const SegmentSequence& seq) {
  Rule rule;
  rule.lhs = seq.lhs.render();
  for (std::size_t i = 0; i < seq.tuples.size(); ++i) {
    const SegmentTuple& tuple = seq.tuples[i];
    Component u;
    for (std::size_t g = 0; g < tuple.segments.size(); ++g) {
      if (g) {
        const auto [phi, psi] =
            seq.child_map.at({static_cast<int>(i) + 1, static_cast<int>(g)});
        u.emplace_back(Variable{phi, psi});
      }
      for (std::size_t index : tuple.segments[g].run) u.emplace_back(m.transitions[index].label);
    }
    rule.comp.components.push_back(std::move(u));
  }
  for (const auto& b : seq.rhs) {
    rule.rhs.push_back(b.render());
    rule.comp.arg_sorts.push_back(static_cast<int>(b.fan_out()));
  }
  return rule;
}

Pmcfg automaton_to_run_grammar(const Tsa& m, int k) {
  require_cycle_free(m);
  SearchBudget probe;
  probe.max_steps = 256;
  probe.max_eps_between_reads = 32;
  const SnfCheck snf = is_stack_normal_form_bounded(m, 3, probe);
  if (snf.verdict == SnfVerdict::kViolated)
    throw std::invalid_argument("automaton accepts with the pointer at " +
                                render_position(snf.pointer) + " after " +
                                render_run(m, *snf.witness));

  Pmcfg g;
  for (const auto& a : initial_types(m)) {
    g.initials.insert(a.render());
    g.nonterminals[a.render()] = 1;
  }
  std::set<std::string> rendered;
  for_each_reachable_sequence(m, k, [&](SegmentSequence&& seq) {
    Rule rule = sequence_rule(m, seq);
    g.nonterminals[rule.lhs] = rule.comp.fan_out();
    for (std::size_t b = 0; b < rule.rhs.size(); ++b)
      g.nonterminals[rule.rhs[b]] = rule.comp.arg_sorts[b];
    for (const auto& component : rule.comp.components)
      for (const auto& item : component)
        if (const auto* s = std::get_if<Symbol>(&item)) g.terminals.insert(*s);
    g.rules.push_back(std::move(rule));
  });

  g = restrict_to_reachable(restrict_to_productive(g));
  std::set<std::string> used(g.initials.begin(), g.initials.end());
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    g.rules[i].label = "r" + std::to_string(i + 1);
    used.insert(g.rules[i].lhs);
    used.insert(g.rules[i].rhs.begin(), g.rules[i].rhs.end());
  }
  std::erase_if(g.nonterminals, [&](const auto& e) { return !used.contains(e.first); });
  return g;
}

Pmcfg apply_output_homomorphism(const Pmcfg& run_grammar, const Tsa& m) {
  std::map<std::string, Symbol> image;
  for (const auto& t : m.transitions) image[t.label] = t.read;
  Pmcfg out = run_grammar;
  out.terminals.clear();
  for (auto& rule : out.rules) {
    for (auto& component : rule.comp.components) {
      Component mapped;
      for (auto& item : component) {
        if (const auto* label = std::get_if<Symbol>(&item)) {
          auto it = image.find(*label);
          if (it == image.end())
            throw std::invalid_argument("unknown transition " + *label);
          if (it->second.empty()) continue;
          out.terminals.insert(it->second);
          mapped.emplace_back(it->second);
        } else {
          mapped.push_back(item);
        }
      }
      component = std::move(mapped);
    }
  }
  return out;
}

AutomatonToGrammar automaton_to_grammar(const Tsa& m, int k, std::size_t max_iterations) {
  AutomatonToGrammar out;
  CycleRemoval removal = remove_cycles(m, max_iterations);
  if (!removal.converged)
    throw std::runtime_error("cycle removal did not converge after " +
                             std::to_string(removal.iterations) + " iterations");
  out.cycle_iterations = removal.iterations;
  out.normalized = to_stack_normal_form(removal.automaton);
  out.run_grammar = automaton_to_run_grammar(out.normalized, k);
  out.grammar =
      restrict_to_productive(apply_output_homomorphism(out.run_grammar, out.normalized));
  return out;
}

}  // namespace tsa
