#include "tsa/g2a.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace tsa {

std::string render_rule_position(const Pmcfg& g, const RulePosition& p) {
  return "⟨" + g.rules.at(p.rule).label + "," + std::to_string(p.component) + "," +
         std::to_string(p.item) + "⟩";
}

std::optional<int> restriction_bound(const Pmcfg& g) {
  const Classification c = classify(g);
  if (!c.is_mcfg) return std::nullopt;
  return std::max(c.fan_out, 1);
}

namespace {

class Compiler {
 public:
  explicit Compiler(const Pmcfg& g) : g_(g) {}

  CompiledAutomaton run() {
    out_.grammar = g_;
    out_.restriction = restriction_bound(g_);
    Tsa& m = out_.automaton;
    const bool accepts_empty = derives_empty_word(g_);
    m.initial_state = accepts_empty ? kBox : kStart;
    m.final_states = {kBox};
    m.terminals = g_.terminals;
    m.stack_alphabet.insert(kBox);

    if (!accepts_empty) add_state(kStart, {CompiledState::Kind::kStart, {}});
    add_state(kBox, {CompiledState::Kind::kBox, {}});
    add_state(kBox + "+", {CompiledState::Kind::kBoxPlus, {}});
    add_state(kBox + "-", {CompiledState::Kind::kBoxMinus, {}});
    for (std::size_t r = 0; r < g_.rules.size(); ++r) {
      const Rule& rule = g_.rules[r];
      m.stack_alphabet.insert(rule.label);
      out_.rule_symbols.emplace(rule.label, r);
      for (int i = 1; i <= rule.comp.fan_out(); ++i) {
        const int len = static_cast<int>(rule.comp.components[i - 1].size());
        for (int j = 0; j <= len; ++j) {
          const RulePosition p{r, i, j};
          const std::string name = pos(p);
          m.stack_alphabet.insert(name);
          add_state(name, {CompiledState::Kind::kPos, p});
          add_state(name + "+", {CompiledState::Kind::kPosPlus, p});
          add_state(name + "-", {CompiledState::Kind::kPosMinus, p});
        }
      }
    }

    for (std::size_t r = 0; r < g_.rules.size(); ++r) {
      const Rule& rule = g_.rules[r];
      if (g_.initials.contains(rule.lhs) && rule.comp.fan_out() == 1) {
        const int len = static_cast<int>(rule.comp.components[0].size());
        add("init(" + rule.label + ")", m.initial_state, "", pred::True{}, instr::Push{1, kBox},
            pos({r, 1, 0}));
        add("suspend1(" + rule.label + ",1," + kBox + ")", pos({r, 1, len}), "",
            pred::Equals{kBox}, instr::Set{rule.label}, kBox + "-");
        add("suspend2(" + kBox + ")", kBox + "-", "", pred::True{}, instr::Down{}, kBox);
      }
      for (int i = 1; i <= rule.comp.fan_out(); ++i) {
        const auto& component = rule.comp.components[i - 1];
        for (int j = 1; j <= static_cast<int>(component.size()); ++j) {
          const std::string before = pos({r, i, j - 1});
          const std::string q = pos({r, i, j});
          const std::string rij = rule.label + "," + std::to_string(i) + "," +
                                  std::to_string(j);
          if (const auto* sigma = std::get_if<Symbol>(&component[j - 1])) {
            add("read(" + rij + ")", before, *sigma, pred::True{}, instr::Id{}, q);
            continue;
          }
          const Variable v = std::get<Variable>(component[j - 1]);
          for (std::size_t r2 : g_.rules_for(rule.rhs.at(v.arg - 1))) {
            const Rule& callee = g_.rules[r2];
            if (v.comp > callee.comp.fan_out()) continue;
            const int len = static_cast<int>(callee.comp.components[v.comp - 1].size());
            const std::string entry = pos({r2, v.comp, 0});
            add("call(" + rij + "," + callee.label + ")", before, "", pred::True{},
                instr::Push{v.arg, q}, entry);
            add("resume1(" + rij + ")", before, "", pred::True{}, instr::Up{v.arg},
                q + "+");
            add("resume2(" + rij + "," + callee.label + ")", q + "+", "",
                pred::Equals{callee.label}, instr::Set{q}, entry);
            add("suspend1(" + callee.label + "," + std::to_string(v.comp) + "," + q + ")",
                pos({r2, v.comp, len}), "", pred::Equals{q}, instr::Set{callee.label},
                q + "-");
            add("suspend2(" + q + ")", q + "-", "", pred::True{}, instr::Down{}, q);
          }
        }
      }
    }
    return std::move(out_);
  }

 private:
  std::string pos(const RulePosition& p) const { return render_rule_position(g_, p); }

  void add_state(const std::string& name, CompiledState info) {
    if (out_.states.emplace(name, info).second) out_.automaton.states.push_back(name);
  }

  void add(std::string label, std::string source, Symbol read, Predicate p,
           Instruction f, std::string target) {
    if (!labels_.insert(label).second) return;
    out_.automaton.transitions.push_back(Transition{std::move(label), std::move(source),
                                                    std::move(read), std::move(p),
                                                    std::move(f), std::move(target)});
  }

  const Pmcfg& g_;
  CompiledAutomaton out_;
  std::set<std::string> labels_;
};

}  // namespace

CompiledAutomaton grammar_to_automaton(const Pmcfg& g) {
  const auto violations = validate_grammar(g);
  if (!violations.empty())
    throw std::invalid_argument("invalid grammar: " + violations.front().message);
  return Compiler(g).run();
}

SearchBudget compiled_budget(const CompiledAutomaton& c, SearchBudget base) {
  if (c.restriction && !base.restriction_k) base.restriction_k = c.restriction;
  return base;
}

ExtractedDerivation extract_derivation(const CompiledAutomaton& c,
                                       const TreeStack& final_storage) {
  ExtractedDerivation out;
  for (const auto& [p, symbol] : final_storage.nodes()) {
    if (p.empty() || p.front() != 1) continue;
    auto it = c.rule_symbols.find(symbol);
    if (it == c.rule_symbols.end())
      throw std::invalid_argument("node " + render_position(p) + " carries " + symbol +
                                  ", not a rule");
    out.nodes.emplace(Position(p.begin() + 1, p.end()), it->second);
  }
  const Pmcfg& g = c.grammar;
  std::function<std::optional<Derivation>(const Position&)> build =
      [&](const Position& at) -> std::optional<Derivation> {
    auto node = out.nodes.find(at);
    if (node == out.nodes.end()) return std::nullopt;
    const Rule& rule = g.rules.at(node->second);
    Derivation d{node->second, {}};
    for (int k = 1; k <= rule.comp.rank(); ++k) {
      Position child = at;
      child.push_back(k);
      auto sub = build(child);
      if (!sub || g.rules[sub->rule].lhs != rule.rhs[k - 1]) return std::nullopt;
      d.children.push_back(std::move(*sub));
    }
    return d;
  };
  out.derivation = build(Position{});
  return out;
}

std::optional<std::string> check_rule_constancy(const CompiledAutomaton& c,
                                                const std::vector<Configuration>& trace) {
  std::map<Position, std::size_t> rule_at;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto it = c.states.find(trace[i].state);
    if (it == c.states.end() || it->second.kind != CompiledState::Kind::kPos) continue;
    const Position& p = trace[i].storage.pointer();
    if (p.empty()) continue;
    const std::size_t r = it->second.pos.rule;
    auto [seen, fresh] = rule_at.emplace(p, r);
    if (!fresh && seen->second != r)
      return "configuration " + std::to_string(i) + ": position " + render_position(p) +
             " visited with rules " + c.grammar.rules[seen->second].label + " and " +
             c.grammar.rules[r].label;
  }
  return std::nullopt;
}

std::optional<std::string> check_run_shape(const CompiledAutomaton& c, const Run& run) {
  if (run.empty()) return "empty run";
  const Transition& first = c.automaton.transitions.at(run.front());
  const Transition& last = c.automaton.transitions.at(run.back());
  if (!first.label.starts_with("init(") || !first.reads_epsilon())
    return "run starts with " + first.label;
  if (last.label != "suspend2(" + kBox + ")" || !last.reads_epsilon())
    return "run ends with " + last.label;
  return std::nullopt;
}

}  // namespace tsa
