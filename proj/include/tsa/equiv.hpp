#pragma once

#include <cstddef>
#include <set>

#include "tsa/automaton.hpp"
#include "tsa/grammar.hpp"

namespace tsa {

struct EquivalenceReport {
  std::size_t max_len = 0;
  std::set<Word> only_in_grammar;
  std::set<Word> only_in_automaton;
  bool truncated = false;

  bool equivalent() const {
    return only_in_grammar.empty() && only_in_automaton.empty() && !truncated;
  }
};

/// Compares the two languages on words of length at most `max_len`.
EquivalenceReport compare_languages(const Pmcfg& g, const Tsa& m, std::size_t max_len,
                                    std::size_t max_nodes, const SearchBudget& budget);

}  // namespace tsa
