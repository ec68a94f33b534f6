// Command-line front end for tree stack automata and PMCFGs.
//
// Exit codes: 0 success or equivalent, 1 rejected, inequivalent or
// violated, 2 usage or input error, 3 inconclusive because a search budget
// was exhausted.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "json.hpp"
#include "tsa/a2g.hpp"
#include "tsa/automaton.hpp"
#include "tsa/equiv.hpp"
#include "tsa/g2a.hpp"
#include "tsa/grammar.hpp"
#include "tsa/io.hpp"
#include "tsa/normalform.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

struct Budgets {
  std::size_t max_steps = 2000;
  std::size_t max_eps = 64;
  std::size_t max_len = 8;
  std::size_t max_nodes = 24;
  std::optional<int> k;
  bool json = false;

  tsa::SearchBudget search() const {
    tsa::SearchBudget b;
    b.max_steps = max_steps;
    b.max_eps_between_reads = max_eps;
    b.restriction_k = k;
    return b;
  }
};

void add_budget_options(CLI::App* cmd, Budgets& b, bool with_k = false) {
  cmd->add_option("--max-steps", b.max_steps, "longest run explored")->capture_default_str();
  cmd->add_option("--max-eps", b.max_eps, "longest run of ε-steps between reads")
      ->capture_default_str();
  cmd->add_option("--max-len", b.max_len, "longest word enumerated")->capture_default_str();
  cmd->add_option("--max-nodes", b.max_nodes, "largest derivation enumerated")
      ->capture_default_str();
  if (with_k) cmd->add_option("--k", b.k, "prune runs entering a position more than k times");
  cmd->add_flag("--json", b.json, "machine-readable output");
}

bool looks_like_automaton(const std::string& text) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#')
      return line.substr(first).starts_with("states:") ||
             line.substr(first).starts_with("trans");
    start = end + 1;
  }
  return false;
}

tsa::Pmcfg load_grammar(const std::string& path) {
  return tsa::parse_grammar(tsa::read_file(path));
}

tsa::Tsa load_automaton(const std::string& path) {
  const std::string text = tsa::read_file(path);
  if (!looks_like_automaton(text)) {
    // a grammar stands for its compiled automaton
    return tsa::grammar_to_automaton(tsa::parse_grammar(text)).automaton;
  }
  return tsa::parse_automaton(text);
}

void print_words(const std::set<tsa::Word>& words, bool json) {
  if (json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& w : words) out.push_back(tsa::render_word(w, "", ""));
    std::cout << out.dump(2) << '\n';
    return;
  }
  for (const auto& w : words) std::cout << tsa::render_word(w) << '\n';
}

void print_trace(const tsa::Tsa& m, const tsa::Run& run,
                 const std::vector<tsa::Configuration>& trace, bool json) {
  const auto records = tsa::trace_records(m, run, trace);
  if (json) {
    std::cout << tsa::trace_to_json(records) << '\n';
    return;
  }
  for (const auto& r : records) {
    std::cout << (r.transition ? "|- " + *r.transition + "\n" : "") << "  (" << r.state
              << ", " << r.storage << ", " << (r.remaining.empty() ? "ε" : r.remaining)
              << ")\n";
  }
}

int report_equivalence(const tsa::EquivalenceReport& r, bool json) {
  if (json) {
    nlohmann::json out;
    out["max_len"] = r.max_len;
    out["truncated"] = r.truncated;
    out["equivalent"] = r.equivalent();
    out["only_in_grammar"] = nlohmann::json::array();
    out["only_in_automaton"] = nlohmann::json::array();
    for (const auto& w : r.only_in_grammar)
      out["only_in_grammar"].push_back(tsa::render_word(w, "", ""));
    for (const auto& w : r.only_in_automaton)
      out["only_in_automaton"].push_back(tsa::render_word(w, "", ""));
    std::cout << out.dump(2) << '\n';
  } else {
    for (const auto& w : r.only_in_grammar)
      std::cout << "only in grammar: " << tsa::render_word(w) << '\n';
    for (const auto& w : r.only_in_automaton)
      std::cout << "only in automaton: " << tsa::render_word(w) << '\n';
    if (r.truncated) std::cout << "search truncated; raise --max-steps or --max-eps\n";
    std::cout << (r.equivalent() ? "equivalent" : r.truncated && r.only_in_grammar.empty() &&
                                                          r.only_in_automaton.empty()
                                                      ? "inconclusive"
                                                      : "not equivalent")
              << " up to length " << r.max_len << '\n';
  }
  if (!r.only_in_grammar.empty() || !r.only_in_automaton.empty()) return kNegative;
  return r.truncated ? kInconclusive : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree stack automata and multiple context-free grammars"};
  app.require_subcommand(1);
  Budgets b;
  std::string input, second, word, run_file, mode;
  int k = 0;
  bool productive = false;
  bool run_grammar = false;
  std::size_t max_iterations = 100;

  auto* validate = app.add_subcommand("validate", "check a grammar or automaton file");
  validate->add_option("file", input)->required();

  auto* g2a = app.add_subcommand("g2a", "compile a grammar into a tree stack automaton");
  g2a->add_option("grammar", input)->required();
  g2a->add_flag("--productive", productive, "drop unproductive rules first");

  auto* a2g = app.add_subcommand("a2g", "convert a k-restricted automaton into a k-MCFG");
  a2g->add_option("automaton", input)->required();
  a2g->add_option("--k", k, "restriction bound")->required();
  a2g->add_flag("--runs", run_grammar, "print the grammar of accepting runs instead");
  a2g->add_option("--max-iterations", max_iterations, "cycle removal cap")
      ->capture_default_str();

  auto* recognize = app.add_subcommand("recognize", "search for an accepting run");
  recognize->add_option("automaton", input, "automaton, or grammar to compile")->required();
  recognize->add_option("word", word)->required();
  add_budget_options(recognize, b, true);

  auto* replay = app.add_subcommand("replay", "replay a run and print its trace");
  replay->add_option("automaton", input)->required();
  replay->add_option("word", word)->required();
  replay->add_option("--run", run_file, "file of transition labels")->required();
  add_budget_options(replay, b);

  auto* enum_grammar = app.add_subcommand("enum-grammar", "list short words of a grammar");
  enum_grammar->add_option("grammar", input)->required();
  add_budget_options(enum_grammar, b);

  auto* enum_automaton =
      app.add_subcommand("enum-automaton", "list short words of an automaton");
  enum_automaton->add_option("automaton", input)->required();
  add_budget_options(enum_automaton, b, true);

  auto* check = app.add_subcommand("check", "check a property of an automaton");
  check->add_option("property", mode)
      ->required()
      ->check(CLI::IsMember({"cycle-free", "snf", "restriction"}));
  check->add_option("automaton", input)->required();
  add_budget_options(check, b, true);

  auto* normalize = app.add_subcommand("normalize", "apply a normal-form transformation");
  normalize->add_option("form", mode)->required()->check(CLI::IsMember({"cycle-free", "snf"}));
  normalize->add_option("automaton", input)->required();
  normalize->add_option("--max-iterations", max_iterations, "cycle removal cap")
      ->capture_default_str();

  auto* equiv = app.add_subcommand("equiv", "compare a grammar and an automaton");
  equiv->add_option("grammar", input)->required();
  equiv->add_option("automaton", second)->required();
  add_budget_options(equiv, b, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (validate->parsed()) {
      const std::string text = tsa::read_file(input);
      std::vector<std::string> problems;
      if (looks_like_automaton(text)) {
        problems = tsa::validate_automaton(tsa::parse_automaton(text));
      } else {
        const auto g = tsa::parse_grammar(text);
        for (const auto& v : tsa::validate_grammar(g))
          problems.push_back((v.rule ? g.rules[*v.rule].label + ": " : "") + v.message);
        for (const auto& nt : g.initials)
          if (!tsa::productive_nonterminals(g).contains(nt))
            std::cerr << "note: initial " << nt << " is unproductive\n";
      }
      for (const auto& p : problems) std::cout << p << '\n';
      if (problems.empty()) std::cout << "ok\n";
      return problems.empty() ? kOk : kNegative;
    }

    if (g2a->parsed()) {
      auto g = load_grammar(input);
      if (productive) g = tsa::restrict_to_productive(g);
      const auto compiled = tsa::grammar_to_automaton(g);
      if (compiled.restriction)
        std::cout << "# " << *compiled.restriction << "-restricted\n";
      std::cout << tsa::print_automaton(compiled.automaton);
      return kOk;
    }

    if (a2g->parsed()) {
      const auto result = tsa::automaton_to_grammar(load_automaton(input), k, max_iterations);
      std::cout << tsa::print_grammar(run_grammar ? result.run_grammar : result.grammar);
      return kOk;
    }

    if (recognize->parsed()) {
      const std::string text = tsa::read_file(input);
      tsa::Tsa m;
      tsa::SearchBudget budget = b.search();
      if (looks_like_automaton(text)) {
        m = tsa::parse_automaton(text);
      } else {
        const auto compiled = tsa::grammar_to_automaton(tsa::parse_grammar(text));
        budget = tsa::compiled_budget(compiled, budget);
        m = compiled.automaton;
      }
      const tsa::Word w = tsa::word_from_string(word);
      const auto result = tsa::recognize(m, w, budget);
      if (!result.run) {
        std::cout << (result.truncated ? "no run found within budget\n" : "rejected\n");
        return result.truncated ? kInconclusive : kNegative;
      }
      if (!b.json) std::cout << "accepted: " << tsa::render_run(m, *result.run) << '\n';
      print_trace(m, *result.run, tsa::replay(m, w, *result.run).trace, b.json);
      return kOk;
    }

    if (replay->parsed()) {
      const auto m = load_automaton(input);
      const auto run = tsa::parse_run(m, tsa::read_file(run_file));
      const auto result = tsa::replay(m, tsa::word_from_string(word), run);
      print_trace(m, run, result.trace, b.json);
      if (!result.ok()) {
        std::cerr << "step " << result.failure->step + 1 << ": " << result.failure->message
                  << '\n';
        return kNegative;
      }
      if (!result.accepting(m)) {
        std::cerr << "run ends in non-final state " << result.trace.back().state << '\n';
        return kNegative;
      }
      return kOk;
    }

    if (enum_grammar->parsed()) {
      print_words(tsa::enumerate_bounded_language(load_grammar(input), b.max_len, b.max_nodes),
                  b.json);
      return kOk;
    }

    if (enum_automaton->parsed()) {
      const auto lang =
          tsa::enumerate_bounded_automaton_language(load_automaton(input), b.max_len, b.search());
      print_words(lang.words, b.json);
      if (lang.truncated) std::cerr << "search truncated; the list may be incomplete\n";
      return lang.truncated ? kInconclusive : kOk;
    }

    if (check->parsed()) {
      const auto m = load_automaton(input);
      if (mode == "cycle-free") {
        const auto loop = tsa::find_stay_loop(m);
        if (!loop) {
          std::cout << "cycle-free\n";
          return kOk;
        }
        std::cout << "loop at (" << loop->state << ", " << loop->symbol
                  << "): " << tsa::render_run(m, loop->run) << '\n';
        return kNegative;
      }
      if (mode == "snf") {
        const auto r = tsa::is_stack_normal_form_bounded(m, b.max_len, b.search());
        switch (r.verdict) {
          case tsa::SnfVerdict::kHolds:
            std::cout << "stack normal form holds up to length " << b.max_len << '\n';
            return kOk;
          case tsa::SnfVerdict::kViolated:
            std::cout << "final state reached at pointer " << tsa::render_position(r.pointer)
                      << ": " << tsa::render_run(m, *r.witness) << '\n';
            return kNegative;
          case tsa::SnfVerdict::kInconclusive:
            std::cout << "inconclusive: search truncated\n";
            return kInconclusive;
        }
      }
      // restriction: every accepting run within the budget stays within k
      if (!b.k) throw CLI::ValidationError("--k", "check restriction needs --k");
      tsa::SearchBudget unpruned = b.search();
      unpruned.restriction_k.reset();
      std::optional<tsa::Run> witness;
      const auto r = tsa::explore(m, b.max_len, unpruned, [&](const tsa::ExploreEvent& e) {
        if (m.is_final(e.state) && tsa::max_counter(e.counters) > *b.k) {
          witness = tsa::Run(e.run.begin(), e.run.end());
          return false;
        }
        return true;
      });
      if (witness) {
        std::cout << "run exceeds " << *b.k << ": " << tsa::render_run(m, *witness) << '\n';
        return kNegative;
      }
      if (r.truncated) {
        std::cout << "no violation found, but the search was truncated\n";
        return kInconclusive;
      }
      std::cout << "every accepting run up to length " << b.max_len << " is " << *b.k
                << "-restricted\n";
      return kOk;
    }

    if (normalize->parsed()) {
      const auto m = load_automaton(input);
      if (mode == "snf") {
        std::cout << tsa::print_automaton(tsa::to_stack_normal_form(m));
        return kOk;
      }
      const auto r = tsa::remove_cycles(m, max_iterations);
      std::cout << tsa::print_automaton(r.automaton);
      if (!r.converged) {
        std::cerr << "still cyclic after " << r.iterations << " iterations\n";
        return kInconclusive;
      }
      return kOk;
    }

    if (equiv->parsed()) {
      const auto g = load_grammar(input);
      const auto m = load_automaton(second);
      return report_equivalence(
          tsa::compare_languages(g, m, b.max_len, b.max_nodes, b.search()), b.json);
    }
  } catch (const tsa::ParseError& e) {
    std::cerr << "parse error at " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
