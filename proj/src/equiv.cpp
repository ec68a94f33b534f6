#include "tsa/equiv.hpp"

#include <algorithm>
#include <iterator>

namespace tsa {

EquivalenceReport compare_languages(const Pmcfg& g, const Tsa& m, std::size_t max_len,
                                    std::size_t max_nodes, const SearchBudget& budget) {
  EquivalenceReport report;
  report.max_len = max_len;
  const auto from_grammar = enumerate_bounded_language(g, max_len, max_nodes);
  const auto from_automaton = enumerate_bounded_automaton_language(m, max_len, budget);
  report.truncated = from_automaton.truncated;
  std::set_difference(from_grammar.begin(), from_grammar.end(),
                      from_automaton.words.begin(), from_automaton.words.end(),
                      std::inserter(report.only_in_grammar, report.only_in_grammar.end()));
  std::set_difference(from_automaton.words.begin(), from_automaton.words.end(),
                      from_grammar.begin(), from_grammar.end(),
                      std::inserter(report.only_in_automaton, report.only_in_automaton.end()));
  return report;
}

}  // namespace tsa
