#include "tsa/grammar.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace tsa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::map<Variable, int> variable_counts(const CompositionFunction& f) {
  std::map<Variable, int> counts;
  for (const auto& component : f.components)
    for (const auto& item : component)
      if (const auto* v = std::get_if<Variable>(&item)) ++counts[*v];
  return counts;
}

std::size_t total_length(const StringTuple& t) {
  std::size_t n = 0;
  for (const auto& w : t) n += w.size();
  return n;
}

}  // namespace

bool CompositionFunction::is_linear() const {
  for (const auto& [v, n] : variable_counts(*this))
    if (n > 1) return false;
  return true;
}

bool CompositionFunction::is_nondeleting() const {
  const auto counts = variable_counts(*this);
  for (int i = 1; i <= rank(); ++i)
    for (int j = 1; j <= arg_sorts[i - 1]; ++j)
      if (!counts.contains(Variable{i, j})) return false;
  return true;
}

StringTuple CompositionFunction::apply(
    const std::vector<const StringTuple*>& args) const {
  StringTuple result;
  result.reserve(components.size());
  for (const auto& component : components) {
    Word w;
    for (const auto& item : component) {
      std::visit(overloaded{
                     [&](const Symbol& s) { w.push_back(s); },
                     [&](const Variable& v) {
                       const auto& arg = *args.at(v.arg - 1);
                       const auto& part = arg.at(v.comp - 1);
                       w.insert(w.end(), part.begin(), part.end());
                     },
                 },
                 item);
    }
    result.push_back(std::move(w));
  }
  return result;
}

int Pmcfg::sort_of(const std::string& nt) const {
  auto it = nonterminals.find(nt);
  if (it == nonterminals.end())
    throw std::invalid_argument("undeclared nonterminal " + nt);
  return it->second;
}

std::vector<std::size_t> Pmcfg::rules_for(const std::string& nt) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].lhs == nt) out.push_back(i);
  return out;
}

std::optional<std::size_t> Pmcfg::rule_index(const std::string& label) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].label == label) return i;
  return std::nullopt;
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::vector<Violation> validate_grammar(const Pmcfg& g) {
  std::vector<Violation> out;
  for (const auto& s : g.initials) {
    auto it = g.nonterminals.find(s);
    if (it == g.nonterminals.end())
      out.push_back({std::nullopt, "initial " + s + " is not a declared nonterminal"});
    else if (it->second != 1)
      out.push_back({std::nullopt, "initial not in N₁: " + s + " has sort " +
                                       std::to_string(it->second)});
  }
  for (const auto& [nt, sort] : g.nonterminals)
    if (sort < 1)
      out.push_back({std::nullopt, "nonterminal " + nt + " has non-positive sort"});

  std::set<std::string> labels;
  for (std::size_t r = 0; r < g.rules.size(); ++r) {
    const Rule& rule = g.rules[r];
    auto report = [&](std::string msg) {
      out.push_back({r, "rule " + rule.label + ": " + std::move(msg)});
    };
    if (!labels.insert(rule.label).second) report("duplicate rule label");

    const auto& f = rule.comp;
    if (f.components.empty()) report("fan-out must be positive");
    if (!g.nonterminals.contains(rule.lhs)) {
      report("undeclared lhs " + rule.lhs);
    } else if (g.nonterminals.at(rule.lhs) != f.fan_out()) {
      report("sort of " + rule.lhs + " differs from fan-out " +
             std::to_string(f.fan_out()));
    }
    if (rule.rhs.size() != f.arg_sorts.size()) {
      report("rank " + std::to_string(f.rank()) + " differs from rhs length " +
             std::to_string(rule.rhs.size()));
    }
    for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
      auto it = g.nonterminals.find(rule.rhs[i]);
      if (it == g.nonterminals.end()) {
        report("undeclared rhs nonterminal " + rule.rhs[i]);
      } else if (i < f.arg_sorts.size() && it->second != f.arg_sorts[i]) {
        report("argument " + std::to_string(i + 1) + " sort mismatch for " +
               rule.rhs[i]);
      }
    }
    for (const auto& component : f.components) {
      for (const auto& item : component) {
        const auto* v = std::get_if<Variable>(&item);
        if (!v) {
          if (!g.terminals.contains(std::get<Symbol>(item)))
            report("undeclared terminal " + std::get<Symbol>(item));
          continue;
        }
        if (v->arg < 1 || v->comp < 1 || v->arg > f.rank() ||
            v->comp > f.arg_sorts[v->arg - 1]) {
          report("variable index out of range: x" + std::to_string(v->arg) +
                 "." + std::to_string(v->comp));
        }
      }
    }
  }
  return out;
}

Classification classify(const Pmcfg& g) {
  Classification c;
  for (const auto& rule : g.rules) {
    c.is_mcfg = c.is_mcfg && rule.comp.is_linear();
    c.is_nondeleting = c.is_nondeleting && rule.comp.is_nondeleting();
    c.fan_out = std::max(c.fan_out, rule.comp.fan_out());
  }
  return c;
}

StringTuple evaluate_derivation(const Pmcfg& g, const Derivation& d) {
  if (d.rule >= g.rules.size())
    throw std::invalid_argument("derivation references unknown rule");
  const Rule& rule = g.rules[d.rule];
  if (d.children.size() != rule.rhs.size())
    throw std::invalid_argument("rule " + rule.label + " expects " +
                                std::to_string(rule.rhs.size()) + " children");
  std::vector<StringTuple> values;
  values.reserve(d.children.size());
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    const Rule& child = g.rules.at(d.children[i].rule);
    if (child.lhs != rule.rhs[i])
      throw std::invalid_argument("sort mismatch: child " + child.label +
                                  " derives " + child.lhs + ", expected " +
                                  rule.rhs[i]);
    values.push_back(evaluate_derivation(g, d.children[i]));
  }
  std::vector<const StringTuple*> args;
  for (const auto& v : values) args.push_back(&v);
  return rule.comp.apply(args);
}

std::set<Word> enumerate_bounded_language(const Pmcfg& g, std::size_t max_len,
                                          std::size_t max_derivation_nodes) {
  // Per nonterminal, every tuple with the smallest derivation size that
  // produces it. Replacing a subderivation by a smaller one with the same
  // tuple keeps the overall result, so minimal sizes suffice.
  const bool prune_by_length = classify(g).is_nondeleting;
  std::map<std::string, std::set<StringTuple>> seen;
  // layers[nt][n] = tuples whose minimal derivation has exactly n nodes
  std::map<std::string, std::vector<std::vector<StringTuple>>> layers;
  for (const auto& [nt, sort] : g.nonterminals)
    layers[nt].resize(max_derivation_nodes + 1);

  for (std::size_t n = 1; n <= max_derivation_nodes; ++n) {
    for (const auto& rule : g.rules) {
      const std::size_t rank = rule.rhs.size();
      if (rank + 1 > n) continue;
      std::vector<const StringTuple*> args(rank);
      std::vector<StringTuple> fresh;
      // assign child sizes summing to n - 1
      std::function<void(std::size_t, std::size_t)> choose =
          [&](std::size_t child, std::size_t budget) {
            if (child == rank) {
              if (budget != 0) return;
              StringTuple t = rule.comp.apply(args);
              if (prune_by_length && total_length(t) > max_len) return;
              if (!seen[rule.lhs].contains(t)) fresh.push_back(std::move(t));
              return;
            }
            const std::size_t remaining_children = rank - child - 1;
            const auto& child_layers = layers[rule.rhs[child]];
            for (std::size_t sz = 1; sz + remaining_children <= budget; ++sz) {
              for (const auto& t : child_layers[sz]) {
                args[child] = &t;
                choose(child + 1, budget - sz);
              }
            }
          };
      choose(0, n - 1);
      auto& known = seen[rule.lhs];
      for (auto& t : fresh)
        if (known.insert(t).second) layers[rule.lhs][n].push_back(std::move(t));
    }
  }

  std::set<Word> words;
  for (const auto& s : g.initials) {
    auto it = seen.find(s);
    if (it == seen.end()) continue;
    for (const auto& t : it->second)
      if (t.size() == 1 && t[0].size() <= max_len) words.insert(t[0]);
  }
  return words;
}

std::set<std::string> productive_nonterminals(const Pmcfg& g) {
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : g.rules) {
      if (productive.contains(rule.lhs)) continue;
      if (std::all_of(rule.rhs.begin(), rule.rhs.end(),
                      [&](const auto& b) { return productive.contains(b); })) {
        productive.insert(rule.lhs);
        changed = true;
      }
    }
  }
  return productive;
}

bool derives_empty_word(const Pmcfg& g) {
  // bit i of a pattern: component i + 1 is empty
  using Pattern = std::uint32_t;
  std::map<std::string, std::set<Pattern>> patterns;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : g.rules) {
      std::vector<std::vector<Pattern>> choices;
      for (const auto& b : rule.rhs) {
        const auto& have = patterns[b];
        choices.emplace_back(have.begin(), have.end());
      }
      if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); }))
        continue;
      std::vector<std::size_t> pick(choices.size(), 0);
      for (;;) {
        Pattern result = 0;
        for (int i = 0; i < rule.comp.fan_out(); ++i) {
          const bool empty = std::all_of(
              rule.comp.components[i].begin(), rule.comp.components[i].end(),
              [&](const Item& item) {
                const auto* v = std::get_if<Variable>(&item);
                return v && (choices[v->arg - 1][pick[v->arg - 1]] >> (v->comp - 1) & 1u);
              });
          if (empty) result |= Pattern{1} << i;
        }
        if (patterns[rule.lhs].insert(result).second) changed = true;
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
  }
  return std::any_of(g.initials.begin(), g.initials.end(), [&](const std::string& s) {
    return g.sort_of(s) == 1 && patterns[s].contains(1u);
  });
}

Pmcfg restrict_to_productive(const Pmcfg& g) {
  const auto productive = productive_nonterminals(g);
  Pmcfg out = g;
  out.rules.clear();
  for (const auto& rule : g.rules) {
    if (!productive.contains(rule.lhs)) continue;
    if (std::all_of(rule.rhs.begin(), rule.rhs.end(),
                    [&](const auto& b) { return productive.contains(b); }))
      out.rules.push_back(rule);
  }
  return out;
}

Pmcfg restrict_to_reachable(const Pmcfg& g) {
  std::set<std::string> reachable(g.initials.begin(), g.initials.end());
  std::vector<std::string> work(g.initials.begin(), g.initials.end());
  while (!work.empty()) {
    const std::string nt = work.back();
    work.pop_back();
    for (const auto& rule : g.rules)
      if (rule.lhs == nt)
        for (const auto& b : rule.rhs)
          if (reachable.insert(b).second) work.push_back(b);
  }
  Pmcfg out = g;
  out.rules.clear();
  for (const auto& rule : g.rules)
    if (reachable.contains(rule.lhs)) out.rules.push_back(rule);
  return out;
}

std::string render_derivation(const Pmcfg& g, const Derivation& d) {
  std::string out = g.rules.at(d.rule).label;
  if (d.children.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    if (i) out += ", ";
    out += render_derivation(g, d.children[i]);
  }
  out += ')';
  return out;
}

std::string render_word(const Word& w, std::string_view separator,
                        std::string_view epsilon) {
  if (w.empty()) return std::string(epsilon);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += separator;
    out += w[i];
  }
  return out;
}

Word word_from_string(std::string_view text) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    w.emplace_back(text.substr(i, len));
    i += len;
  }
  return w;
}

}  // namespace tsa
