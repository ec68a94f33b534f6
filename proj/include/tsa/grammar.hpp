#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tsa {

/// A terminal symbol. Terminals are opaque tokens; the text formats use
/// one code point per terminal, run grammars use transition labels.
using Symbol = std::string;
using Word = std::vector<Symbol>;
using StringTuple = std::vector<Word>;

/// The variable x_i^j: component `comp` of argument `arg` (both 1-based).
struct Variable {
  int arg = 1;
  int comp = 1;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Item = std::variant<Symbol, Variable>;
using Component = std::vector<Item>;

struct CompositionFunction {
  std::vector<int> arg_sorts;
  std::vector<Component> components;

  int fan_out() const { return static_cast<int>(components.size()); }
  int rank() const { return static_cast<int>(arg_sorts.size()); }

  /// Every variable occurs at most once.
  bool is_linear() const;
  /// Every variable of X_(arg_sorts, fan_out) occurs at least once.
  bool is_nondeleting() const;
  /// Applies the function to argument tuples (bottom-up substitution).
  StringTuple apply(const std::vector<const StringTuple*>& args) const;

  friend bool operator==(const CompositionFunction&,
                         const CompositionFunction&) = default;
};

struct Rule {
  std::string label;  // e.g. "r1"; used by renderings and g2a stack symbols
  std::string lhs;
  CompositionFunction comp;
  std::vector<std::string> rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Pmcfg {
  std::map<std::string, int> nonterminals;  // id -> sort
  std::set<Symbol> terminals;
  std::set<std::string> initials;
  std::vector<Rule> rules;

  int sort_of(const std::string& nt) const;
  std::vector<std::size_t> rules_for(const std::string& nt) const;
  std::optional<std::size_t> rule_index(const std::string& label) const;

  friend bool operator==(const Pmcfg&, const Pmcfg&) = default;
};

/// A rule-labelled tree; children correspond positionally to the rule's rhs.
struct Derivation {
  std::size_t rule = 0;
  std::vector<Derivation> children;

  std::size_t size() const;
  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct Violation {
  std::optional<std::size_t> rule;  // offending rule, if any
  std::string message;
};

struct Classification {
  bool is_mcfg = true;
  bool is_nondeleting = true;
  int fan_out = 0;
};

std::vector<Violation> validate_grammar(const Pmcfg& g);
Classification classify(const Pmcfg& g);

/// Throws std::invalid_argument on a sort mismatch inside `d`.
StringTuple evaluate_derivation(const Pmcfg& g, const Derivation& d);

/// Words of complete derivations with at most `max_derivation_nodes` nodes
/// and length at most `max_len`. Exact once the node budget covers every
/// minimal derivation; ε-cycles can make that budget unbounded.
std::set<Word> enumerate_bounded_language(const Pmcfg& g, std::size_t max_len,
                                          std::size_t max_derivation_nodes);

std::set<std::string> productive_nonterminals(const Pmcfg& g);

/// Whether ε ∈ L(g). Exact: tracks which components of each nonterminal can
/// be empty together, so deleting and copying rules are handled.
bool derives_empty_word(const Pmcfg& g);
Pmcfg restrict_to_productive(const Pmcfg& g);
/// Drops rules whose lhs cannot be reached from an initial nonterminal.
Pmcfg restrict_to_reachable(const Pmcfg& g);

/// "r1(r3, r4(r5))"
std::string render_derivation(const Pmcfg& g, const Derivation& d);
/// Concatenation of the symbols; "ε" for the empty word unless `epsilon`
/// says otherwise.
std::string render_word(const Word& w, std::string_view separator = "",
                        std::string_view epsilon = "ε");
/// Splits a string into one terminal per UTF-8 code point.
Word word_from_string(std::string_view text);

}  // namespace tsa
