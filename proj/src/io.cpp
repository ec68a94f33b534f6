#include "tsa/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace tsa {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

constexpr std::string_view kOpenAngle = "⟨";
constexpr std::string_view kCloseAngle = "⟩";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_blank_or_comment(std::string_view line) {
  auto first = line.find_first_not_of(" \t");
  return first == std::string_view::npos || line[first] == '#';
}

/// Cursor over one line of a grammar file.
class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t lineno)
      : line_(line), lineno_(lineno) {}

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
      ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }
  bool looking_at(std::string_view s) {
    skip_ws();
    return line_.substr(pos_, s.size()) == s;
  }
  bool accept(std::string_view s) {
    if (!looking_at(s)) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(lineno_, pos_ + 1, message);
  }
  std::size_t column() const { return pos_ + 1; }

  /// A name: anything up to whitespace or punctuation, where commas and
  /// parentheses inside ⟨…⟩ belong to the name.
  std::string name() {
    skip_ws();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < line_.size()) {
      std::string_view rest = line_.substr(pos_);
      if (rest.starts_with(kOpenAngle)) {
        ++depth;
        pos_ += kOpenAngle.size();
        continue;
      }
      if (rest.starts_with(kCloseAngle)) {
        --depth;
        pos_ += kCloseAngle.size();
        continue;
      }
      const char c = line_[pos_];
      if (depth <= 0) {
        if (std::isspace(static_cast<unsigned char>(c)) ||
            std::string_view("[](),:\"'").find(c) != std::string_view::npos ||
            rest.starts_with("->"))
          break;
      }
      ++pos_;
    }
    if (pos_ == start) fail("expected a name");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string quoted(char quote) {
    expect(std::string_view(&quote, 1));
    const std::size_t start = pos_;
    const std::size_t end = line_.find(quote, pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    pos_ = end + 1;
    return std::string(line_.substr(start, end - start));
  }

 private:
  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

std::string directive_value(std::string_view line, std::string_view key) {
  auto first = line.find_first_not_of(" \t");
  std::string_view rest = line.substr(first + key.size());
  return std::string(rest);
}

std::vector<std::pair<std::string, std::size_t>> words_with_columns(
    std::string_view text, std::size_t offset) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    out.emplace_back(std::string(text.substr(i, j - i)), offset + i + 1);
    i = j;
  }
  return out;
}

bool starts_directive(std::string_view line, std::string_view key) {
  auto first = line.find_first_not_of(" \t");
  return first != std::string_view::npos && line.substr(first).starts_with(key);
}

bool is_simple_terminal(const Symbol& s) {
  return word_from_string(s).size() == 1 && s != "\"" && s != "'" && s != "\\";
}

}  // namespace

Pmcfg parse_grammar(std::string_view text) {
  Pmcfg g;
  std::map<std::string, int> declared_sorts;
  std::vector<std::string> initial_order;
  struct PendingRule {
    Rule rule;
    std::size_t line;
  };
  std::vector<PendingRule> pending;
  static const std::regex variable_re(R"(x([1-9][0-9]*)\.([1-9][0-9]*))");

  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    const std::size_t lineno = n + 1;
    if (is_blank_or_comment(line)) continue;

    if (starts_directive(line, "initial:")) {
      const auto offset = line.find("initial:") + 8;
      for (auto& [w, col] : words_with_columns(line.substr(offset), offset))
        if (g.initials.insert(w).second) initial_order.push_back(w);
      continue;
    }
    if (starts_directive(line, "sorts:")) {
      const auto offset = line.find("sorts:") + 6;
      for (auto& [w, col] : words_with_columns(line.substr(offset), offset)) {
        const auto eq = w.rfind('=');
        if (eq == std::string::npos || eq == 0)
          throw ParseError(lineno, col, "expected <nonterminal>=<sort>");
        try {
          declared_sorts[w.substr(0, eq)] = std::stoi(w.substr(eq + 1));
        } catch (const std::exception&) {
          throw ParseError(lineno, col + eq + 1, "malformed sort");
        }
      }
      continue;
    }

    LineLexer lex(line, lineno);
    Rule rule;
    std::string first = lex.name();
    if (lex.accept(":")) {
      rule.label = first;
      rule.lhs = lex.name();
    } else {
      rule.lhs = first;
    }
    lex.expect("->");
    lex.expect("[");
    Component current;
    while (true) {
      if (lex.accept("]")) {
        rule.comp.components.push_back(std::move(current));
        break;
      }
      if (lex.accept(",")) {
        rule.comp.components.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (lex.at_end()) lex.fail("unterminated component list");
      if (lex.looking_at("\"")) {
        for (auto& s : word_from_string(lex.quoted('"'))) current.emplace_back(s);
        continue;
      }
      if (lex.looking_at("'")) {
        const std::size_t col = lex.column();
        std::string s = lex.quoted('\'');
        if (s.empty()) throw ParseError(lineno, col, "empty terminal ''");
        current.emplace_back(std::move(s));
        continue;
      }
      lex.skip_ws();
      const std::size_t col = lex.column();
      const std::string token = lex.name();
      std::smatch match;
      if (!std::regex_match(token, match, variable_re))
        throw ParseError(lineno, col, "malformed variable token '" + token + "'");
      current.emplace_back(Variable{std::stoi(match[1]), std::stoi(match[2])});
    }
    lex.expect("(");
    if (!lex.accept(")")) {
      while (true) {
        rule.rhs.push_back(lex.name());
        if (lex.accept(")")) break;
        lex.expect(",");
      }
    }
    if (!lex.at_end()) lex.fail("unexpected trailing input");
    pending.push_back({std::move(rule), lineno});
  }

  // sorts: declarations win, then the fan-out of the first rule for the
  // nonterminal, then the largest component index used on it
  std::map<std::string, int> sorts = declared_sorts;
  for (const auto& p : pending)
    sorts.try_emplace(p.rule.lhs, p.rule.comp.fan_out());
  std::map<std::string, int> used;
  for (const auto& p : pending) {
    for (const auto& component : p.rule.comp.components)
      for (const auto& item : component)
        if (const auto* v = std::get_if<Variable>(&item))
          if (v->arg >= 1 && static_cast<std::size_t>(v->arg) <= p.rule.rhs.size()) {
            int& u = used[p.rule.rhs[v->arg - 1]];
            u = std::max(u, v->comp);
          }
    for (const auto& b : p.rule.rhs) used.try_emplace(b, 1);
  }
  for (const auto& [nt, u] : used) sorts.try_emplace(nt, u);
  for (const auto& s : initial_order) sorts.try_emplace(s, 1);
  g.nonterminals = sorts;

  for (std::size_t i = 0; i < pending.size(); ++i) {
    Rule rule = std::move(pending[i].rule);
    if (rule.label.empty()) rule.label = "r" + std::to_string(i + 1);
    for (const auto& b : rule.rhs) rule.comp.arg_sorts.push_back(sorts.at(b));
    for (const auto& component : rule.comp.components)
      for (const auto& item : component)
        if (const auto* s = std::get_if<Symbol>(&item)) g.terminals.insert(*s);
    g.rules.push_back(std::move(rule));
  }
  return g;
}

std::string print_grammar(const Pmcfg& g) {
  std::ostringstream out;
  out << "initial:";
  for (const auto& s : g.initials) out << ' ' << s;
  out << '\n';

  std::map<std::string, int> inferred;
  for (const auto& rule : g.rules) inferred.try_emplace(rule.lhs, rule.comp.fan_out());
  std::vector<std::string> explicit_sorts;
  for (const auto& [nt, sort] : g.nonterminals) {
    auto it = inferred.find(nt);
    if (it == inferred.end() || it->second != sort)
      explicit_sorts.push_back(nt + "=" + std::to_string(sort));
  }
  if (!explicit_sorts.empty()) {
    out << "sorts:";
    for (const auto& s : explicit_sorts) out << ' ' << s;
    out << '\n';
  }

  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const Rule& rule = g.rules[i];
    if (rule.label != "r" + std::to_string(i + 1)) out << rule.label << ": ";
    out << rule.lhs << " -> [ ";
    for (std::size_t c = 0; c < rule.comp.components.size(); ++c) {
      if (c) out << " , ";
      const auto& component = rule.comp.components[c];
      if (component.empty()) {
        out << "\"\"";
        continue;
      }
      std::vector<std::string> tokens;
      std::string run;
      auto flush = [&] {
        if (!run.empty()) tokens.push_back("\"" + run + "\"");
        run.clear();
      };
      for (const auto& item : component) {
        if (const auto* v = std::get_if<Variable>(&item)) {
          flush();
          tokens.push_back("x" + std::to_string(v->arg) + "." + std::to_string(v->comp));
        } else if (is_simple_terminal(std::get<Symbol>(item))) {
          run += std::get<Symbol>(item);
        } else {
          flush();
          tokens.push_back("'" + std::get<Symbol>(item) + "'");
        }
      }
      flush();
      for (std::size_t t = 0; t < tokens.size(); ++t) out << (t ? " " : "") << tokens[t];
    }
    out << " ] (";
    for (std::size_t b = 0; b < rule.rhs.size(); ++b)
      out << (b ? ", " : " ") << rule.rhs[b];
    out << " )\n";
  }
  return out.str();
}

namespace {

Predicate parse_predicate(const std::string& token, std::size_t line,
                          std::size_t col) {
  if (token.size() < 2 || token.front() != '[' || token.back() != ']')
    throw ParseError(line, col, "expected [predicate], got '" + token + "'");
  const std::string body = token.substr(1, token.size() - 2);
  if (body == "true") return pred::True{};
  if (body == "bottom") return pred::Bottom{};
  if (body.starts_with("eq(") && body.ends_with(")") && body.size() > 4)
    return pred::Equals{body.substr(3, body.size() - 4)};
  throw ParseError(line, col, "unknown predicate '" + body + "'");
}

Instruction parse_instruction(const std::string& token, std::size_t line,
                              std::size_t col) {
  if (token == "id") return instr::Id{};
  if (token == "down") return instr::Down{};
  auto arg = [&](std::string_view head) -> std::string {
    if (!token.starts_with(head) || !token.ends_with(")") ||
        token.size() <= head.size() + 1)
      throw ParseError(line, col, "malformed instruction '" + token + "'");
    return token.substr(head.size(), token.size() - head.size() - 1);
  };
  auto index = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(s, &used);
      if (used != s.size() || n < 1) throw std::invalid_argument(s);
      return n;
    } catch (const std::exception&) {
      throw ParseError(line, col, "child index must be a positive integer");
    }
  };
  if (token.starts_with("push(")) {
    const std::string body = arg("push(");
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw ParseError(line, col, "push needs (<n>,<symbol>)");
    return instr::Push{index(body.substr(0, comma)), body.substr(comma + 1)};
  }
  if (token.starts_with("up(")) return instr::Up{index(arg("up("))};
  if (token.starts_with("set(")) return instr::Set{arg("set(")};
  throw ParseError(line, col, "unknown instruction '" + token + "'");
}

}  // namespace

Tsa parse_automaton(std::string_view text) {
  Tsa m;
  bool have_initial = false;
  struct Ref {
    std::string state;
    std::size_t line, col;
  };
  std::vector<Ref> state_refs;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> symbol_refs;

  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    const std::size_t lineno = n + 1;
    if (is_blank_or_comment(line)) continue;
    const std::size_t indent = line.find_first_not_of(" \t");
    auto values = [&](std::string_view key) {
      return words_with_columns(line.substr(indent + key.size()), indent + key.size());
    };

    if (starts_directive(line, "states:")) {
      for (auto& [w, col] : values("states:")) m.states.push_back(w);
    } else if (starts_directive(line, "initial:")) {
      auto v = values("initial:");
      if (v.size() != 1) throw ParseError(lineno, indent + 1, "exactly one initial state");
      m.initial_state = v[0].first;
      state_refs.push_back({v[0].first, lineno, v[0].second});
      have_initial = true;
    } else if (starts_directive(line, "final:")) {
      for (auto& [w, col] : values("final:")) {
        m.final_states.insert(w);
        state_refs.push_back({w, lineno, col});
      }
    } else if (starts_directive(line, "stack:")) {
      for (auto& [w, col] : values("stack:")) {
        if (w == kRootSymbol) throw ParseError(lineno, col, "@ is reserved for the root");
        m.stack_alphabet.insert(w);
      }
    } else if (starts_directive(line, "terminals:")) {
      for (auto& [w, col] : values("terminals:")) m.terminals.insert(w);
    } else if (starts_directive(line, "trans")) {
      const std::size_t colon = line.find(':', indent);
      if (colon == std::string_view::npos)
        throw ParseError(lineno, indent + 1, "expected 'trans:'");
      std::string label(line.substr(indent + 5, colon - indent - 5));
      label.erase(0, label.find_first_not_of(" \t"));
      label.erase(label.find_last_not_of(" \t") + 1);
      auto toks = words_with_columns(line.substr(colon + 1), colon + 1);
      if (toks.size() != 5)
        throw ParseError(lineno, colon + 2,
                         "expected '<src> -<read>-> <tgt> [<pred>] <instr>'");
      Transition t;
      t.label = label.empty() ? "t" + std::to_string(m.transitions.size() + 1) : label;
      t.source = toks[0].first;
      const std::string& arrow = toks[1].first;
      if (arrow.size() < 4 || arrow.front() != '-' || !arrow.ends_with("->"))
        throw ParseError(lineno, toks[1].second, "expected -<read>-> arrow");
      const std::string read = arrow.substr(1, arrow.size() - 3);
      t.read = read == "eps" ? "" : read;
      if (!t.read.empty()) m.terminals.insert(t.read);
      t.target = toks[2].first;
      t.predicate = parse_predicate(toks[3].first, lineno, toks[3].second);
      t.instruction = parse_instruction(toks[4].first, lineno, toks[4].second);
      state_refs.push_back({t.source, lineno, toks[0].second});
      state_refs.push_back({t.target, lineno, toks[2].second});
      if (const auto* eq = std::get_if<pred::Equals>(&t.predicate))
        symbol_refs.push_back({eq->symbol, {lineno, toks[3].second}});
      if (const auto* push = std::get_if<instr::Push>(&t.instruction))
        symbol_refs.push_back({push->symbol, {lineno, toks[4].second}});
      if (const auto* set = std::get_if<instr::Set>(&t.instruction))
        symbol_refs.push_back({set->symbol, {lineno, toks[4].second}});
      m.transitions.push_back(std::move(t));
    } else {
      throw ParseError(lineno, indent + 1, "unknown directive");
    }
  }
  if (!have_initial) throw ParseError(lines.size(), 1, "missing 'initial:'");
  for (const auto& r : state_refs)
    if (!m.has_state(r.state))
      throw ParseError(r.line, r.col, "reference to undeclared state " + r.state);
  for (const auto& [sym, at] : symbol_refs)
    if (!m.stack_alphabet.contains(sym))
      throw ParseError(at.first, at.second, "reference to undeclared stack symbol " + sym);
  return m;
}

std::string print_automaton(const Tsa& m) {
  std::ostringstream out;
  out << "states:";
  for (const auto& q : m.states) out << ' ' << q;
  out << "\ninitial: " << m.initial_state << "\nfinal:";
  for (const auto& q : m.final_states) out << ' ' << q;
  out << "\nstack:";
  for (const auto& s : m.stack_alphabet) out << ' ' << s;
  out << '\n';
  std::set<Symbol> read;
  for (const auto& t : m.transitions)
    if (!t.reads_epsilon()) read.insert(t.read);
  if (read != m.terminals) {
    out << "terminals:";
    for (const auto& s : m.terminals) out << ' ' << s;
    out << '\n';
  }
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    out << "trans";
    if (t.label != "t" + std::to_string(i + 1)) out << ' ' << t.label;
    out << ": " << t.source << " -" << (t.reads_epsilon() ? "eps" : t.read) << "-> "
        << t.target << " [" << render_predicate(t.predicate) << "] "
        << render_instruction(t.instruction) << '\n';
  }
  return out.str();
}

Run parse_run(const Tsa& m, std::string_view text) {
  Run run;
  std::size_t lineno = 0;
  for (auto line : split_lines(text)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    for (auto& [w, col] : words_with_columns(line, 0)) {
      if (auto idx = m.transition_index(w)) {
        run.push_back(*idx);
        continue;
      }
      if (std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const std::size_t n = std::stoul(w);
        if (n >= 1 && n <= m.transitions.size()) {
          run.push_back(n - 1);
          continue;
        }
      }
      throw ParseError(lineno, col, "unknown transition '" + w + "'");
    }
  }
  return run;
}

std::string trace_to_json(const std::vector<TraceRecord>& records, int indent) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out.push_back({
        {"step", i},
        {"transition", r.transition ? nlohmann::json(*r.transition) : nlohmann::json()},
        {"state", r.state},
        {"stack", r.storage},
        {"pointer", r.pointer},
        {"remaining", r.remaining},
    });
  }
  return out.dump(indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tsa
