#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tsa/automaton.hpp"
#include "tsa/grammar.hpp"

namespace tsa {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Grammar files are line oriented; '#' starts a comment line.
//
//   initial: S
//   sorts: C=2                       (only for nonterminals without rules)
//   S -> [ x1.1 x2.1 x1.2 x2.2 ] ( A, B )
//   A -> [ "a" x1.1 , "c" x1.2 ] ( A )
//   r9: A -> [ "" , "" ] ( )         (optional label, default r<line index>)
//
// "abc" is three terminals, 'abc' is the single terminal abc.
Pmcfg parse_grammar(std::string_view text);
std::string print_grammar(const Pmcfg& g);

// Automaton files:
//
//   states: 1 2 3 4 5
//   initial: 1
//   final: 5
//   stack: * #
//   trans: 1 -a-> 1 [true] push(1,*)
//   trans t9: 4 -eps-> 5 [bottom] id   (optional label, default t<index>)
Tsa parse_automaton(std::string_view text);
std::string print_automaton(const Tsa& m);

/// Whitespace separated transition labels (or 1-based indices).
Run parse_run(const Tsa& m, std::string_view text);

/// JSON array of {"step", "transition", "state", "stack", "pointer",
/// "remaining"} objects, one per configuration of the trace.
std::string trace_to_json(const std::vector<TraceRecord>& records, int indent = 2);

std::string read_file(const std::string& path);

}  // namespace tsa
