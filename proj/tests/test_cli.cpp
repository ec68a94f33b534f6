#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int status;
  std::string out;
};

// Runs the command-line tool with stderr discarded.
Result tsa(const std::string& args) {
  const std::string cmd = std::string("'") + TSA_CLI + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

const std::string fx = std::string("'") + TSA_FIXTURES + "/";

}  // namespace

TEST_CASE("cli: validate and enumerate") {
  CHECK(tsa("validate " + fx + "monadic.tsa'").status == 0);
  CHECK(tsa("validate " + fx + "crossed.mcfg'").status == 0);
  const auto e = tsa("enum-automaton " + fx + "monadic.tsa' --max-len 8");
  CHECK(e.status == 0);
  CHECK(e.out == "ε\naabbccdd\nabcd\n");
  CHECK(tsa("enum-grammar " + fx + "crossed.mcfg' --max-len 4 --max-nodes 12 --json").status == 0);
}

TEST_CASE("cli: recognition exit codes") {
  const auto ok = tsa("recognize " + fx + "monadic.tsa' ''");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("t2 t3 t5 t7 t9") != std::string::npos);
  CHECK(tsa("recognize " + fx + "monadic.tsa' abbcd").status == 1);
  CHECK(tsa("recognize " + fx + "monadic.tsa' aabbccdd --max-steps 5").status == 3);
  CHECK(tsa("recognize " + fx + "crossed.mcfg' bd").status == 0);
}

TEST_CASE("cli: usage and input errors exit with 2") {
  CHECK(tsa("").status == 2);
  CHECK(tsa("frobnicate").status == 2);
  CHECK(tsa("recognize /nonexistent/file abc").status == 2);
  CHECK(tsa("check bogus " + fx + "monadic.tsa'").status == 2);
  CHECK(tsa("enum-grammar " + fx + "monadic.tsa'").status == 2);
}

TEST_CASE("cli: checks and conversions") {
  CHECK(tsa("check cycle-free " + fx + "monadic.tsa'").status == 0);
  CHECK(tsa("check cycle-free " + fx + "selfloop.tsa'").status == 1);
  CHECK(tsa("check snf " + fx + "branching.tsa'").status == 1);
  CHECK(tsa("check restriction " + fx + "monadic.tsa' --k 2 --max-len 8").status == 0);
  CHECK(tsa("check restriction " + fx + "monadic.tsa' --k 1 --max-len 8").status == 1);
  const auto a2g = tsa("a2g " + fx + "monadic.tsa' --k 2");
  CHECK(a2g.status == 0);
  CHECK(a2g.out.find("initial:") == 0);
  CHECK(tsa("g2a " + fx + "crossed.mcfg'").status == 0);
  CHECK(tsa("normalize cycle-free " + fx + "selfloop.tsa'").status == 0);
  CHECK(tsa("equiv " + fx + "crossed.mcfg' " + fx + "branching.tsa' --max-len 6").status == 1);
}

TEST_CASE("cli: replay a run file") {
  const std::string run = std::string(TSA_FIXTURES) + "/monadic.run";
  const auto r = tsa("replay " + fx + "monadic.tsa' abcd --run '" + run + "' --json");
  CHECK(r.status == 0);
  CHECK(r.out.find("\"pointer\"") != std::string::npos);
  CHECK(tsa("replay " + fx + "monadic.tsa' abc --run '" + run + "'").status == 1);
}
