#include <sys/resource.h>
#include <unistd.h>

#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>
#include <streambuf>

#include "doctest.h"
#include "mmp/canonical.hpp"
#include "mmp/cli.hpp"
#include "mmp/vectors.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run mmpkit(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = mmp::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) v.push_back(l);
  return v;
}

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / ("mmpkit_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << contents;
  return p;
}

// Produces `count` copies of a line without holding them in memory.
class RepeatBuf : public std::streambuf {
 public:
  RepeatBuf(std::string line, std::size_t count) : line_(std::move(line) + "\n"), left_(count) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    if (left_ == 0) return traits_type::eof();
    --left_;
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::string line_;
  std::size_t left_;
};

// Counts lines written, discarding them.
class CountBuf : public std::streambuf {
 public:
  std::size_t newlines = 0;

 protected:
  int_type overflow(int_type c) override {
    if (c == '\n') ++newlines;
    return c;
  }
};

long peak_rss_kb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

}  // namespace

TEST_CASE("cli: color on the seven-vertex diagram") {
  const Run r = mmpkit({"color"}, std::string(fixtures::kSevenFive) + "\n");
  CHECK(r.code == 0);
  CHECK(r.out == "NONCOLORABLE\n");
  const Run w = mmpkit({"color", "--witness"}, "abc.\n");
  CHECK(w.out == "COLORABLE a\n");
}

TEST_CASE("cli: canon is label-invariant") {
  const Run a = mmpkit({"canon"}, "xyz,zuv.\n");
  const Run b = mmpkit({"canon"}, "abc,cde.\n");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Run aut = mmpkit({"canon", "--automorphisms"}, "abc.\n");
  CHECK(lines(aut.out).at(0).substr(lines(aut.out).at(0).rfind(' ') + 1) == "6");
  const Run num = mmpkit({"--format", "numeric", "canon"}, "abc.\n");
  CHECK(num.out == "1 2 3.\n");
}

TEST_CASE("cli: generate piped into color") {
  const Run g = mmpkit({"generate", "--blocks", "2", "--block-size", "3", "--connected"});
  REQUIRE(g.code == 0);
  CHECK(lines(g.out).size() == 2);
  CHECK(g.err.find("emitted") != std::string::npos);
  const Run c = mmpkit({"color"}, g.out);
  CHECK(c.out == "COLORABLE\nCOLORABLE\n");
  // Each line is a different isomorphism class.
  const auto ls = lines(g.out);
  CHECK_FALSE(mmp::are_isomorphic(mmp::parse_mmp(ls[0]), mmp::parse_mmp(ls[1])));
}

TEST_CASE("cli: generate with a filter reaches the seven-vertex diagram") {
  const Run g = mmpkit({"generate", "--blocks", "5", "--block-size", "3", "--connected", "--max-vertices", "7",
                        "--filter", "non-01-colorable"});
  REQUIRE(g.code == 0);
  const auto ls = lines(g.out);
  const mmp::MmpDiagram seven = mmp::parse_mmp(fixtures::kSevenFive);
  int matches = 0;
  int thin = 0;  // no two blocks share more than one vertex
  for (const auto& l : ls) {
    const mmp::MmpDiagram d = mmp::parse_mmp(l);
    CHECK(oracle::zero_one_states(d).empty());
    const bool iso = oracle::isomorphic(d, seven);
    matches += iso;
    bool ok = true;
    for (std::size_t i = 0; i < d.block_count(); ++i)
      for (std::size_t j = i + 1; j < d.block_count(); ++j) {
        int common = 0;
        for (mmp::Vertex v : d.block(i)) common += static_cast<int>(std::count(d.block(j).begin(), d.block(j).end(), v));
        ok = ok && common <= 1;
      }
    thin += ok;
    if (ok) CHECK(iso);
  }
  CHECK(matches == 1);
  CHECK(thin == 1);
}

TEST_CASE("cli: exit codes") {
  CHECK(mmpkit({"--no-such-flag"}).code == mmp::cli::kUsage);
  CHECK(mmpkit({"generate"}).code == mmp::cli::kUsage);  // --blocks is required
  CHECK(mmpkit({"generate", "--blocks", "2", "--block-size", "x"}).code == mmp::cli::kUsage);
  CHECK(mmpkit({"color", "/nonexistent/diagrams.mmp"}).code == mmp::cli::kIo);
  const Run bad = mmpkit({"color"}, "abc.\n# c\nab-c.\n");
  CHECK(bad.code == mmp::cli::kUsage);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(mmpkit({"color"}, "abc.\n").code == mmp::cli::kOk);
  CHECK(mmpkit({"--assert", "color"}, "abc.\n").code == mmp::cli::kNegative);
  CHECK(mmpkit({"--assert", "color"}, std::string(fixtures::kSevenFive) + "\n").code == mmp::cli::kOk);
  const Run budget = mmpkit({"--max-nodes", "5", "generate", "--blocks", "5"});
  CHECK(budget.code == mmp::cli::kBudget);
}

TEST_CASE("cli: version and help") {
  const Run v = mmpkit({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == "mmp dialect 1\n");
  const Run h = mmpkit({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("generate") != std::string::npos);
}

TEST_CASE("cli: --parallel keeps input order") {
  std::string input;
  std::string expected;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 700; ++i) {
    const bool ks = i % 3 == 0;
    const mmp::MmpDiagram d = ks ? oracle::scramble(mmp::parse_mmp(fixtures::kSevenFive), rng)
                                 : oracle::random_valid(rng, 9, 4, 3, 3);
    input += mmp::serialize_mmp(d) + "\n";
  }
  expected = mmpkit({"color"}, input).out;
  const Run par = mmpkit({"--parallel", "3", "color"}, input);
  CHECK(par.code == 0);
  CHECK(par.out == expected);
  CHECK(lines(expected).size() == 700);
}

TEST_CASE("cli: streaming 100000 lines in bounded memory") {
  const long before = peak_rss_kb();
  RepeatBuf source(fixtures::kSevenFive, 100000);
  std::istream in(&source);
  CountBuf sink;
  std::ostream out(&sink);
  std::ostringstream err;
  const int code = mmp::cli::run(std::vector<std::string>{"--parallel", "2", "color"}, in, out, err);
  CHECK(code == 0);
  CHECK(sink.newlines == 100000);
  // Input is not buffered beyond a batch: peak memory grows by far less than
  // the 2 MB of text times any per-line parse overhead.
  CHECK(peak_rss_kb() - before < 20 * 1024);
}

TEST_CASE("cli: states") {
  const Run r = mmpkit({"states"}, std::string(fixtures::kCabello) + "\n" + "abc,ade,bcd.\n");
  CHECK(lines(r.out) == std::vector<std::string>{"STATES 01=no quantum=yes", "STATES 01=yes quantum=no failing=b,e unreachable=a,d"});
  std::string grid = mmp::serialize_mmp(fixtures::grid_stateless()) + "\n";
  CHECK(mmpkit({"states"}, grid).out == "STATELESS\n");
  CHECK(mmpkit({"states"}, "abc,ade,abcf.\n").out == "STATES 01=yes quantum=yes unreachable=f\n");
  CHECK(mmpkit({"--assert", "states"}, grid).code == mmp::cli::kNegative);
}

TEST_CASE("cli: lattice") {
  const fs::path laws = temp_file("laws.txt", "# laws\nx ^ (y v z) = (x ^ y) v (x ^ z)\n(x v y)' = x' ^ y'\n");
  const Run r = mmpkit({"lattice", "--check", "orthomodular", "--check", "superposition", "--eval", laws.string()},
                       "abc,cde.\n");
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "LATTICE 12 elements");
  CHECK(ls[1] == "orthomodular HOLDS");
  CHECK(ls[2].rfind("superposition FAILS clause 1", 0) == 0);
  CHECK(ls[3].rfind("FAILS x ^ (y v z) = x ^ y v x ^ z : x=", 0) == 0);
  CHECK(ls[4] == "HOLDS (x v y)' = x' ^ y'");
  CHECK(mmpkit({"lattice"}, std::string(fixtures::kSevenFive) + "\n").out.rfind("NOT-A-LATTICE: ", 0) == 0);
  const fs::path broken = temp_file("broken.txt", "x = x\nx ^ = y\n");
  const Run e = mmpkit({"lattice", "--eval", broken.string()}, "abc.\n");
  CHECK(e.code == mmp::cli::kUsage);
  CHECK(e.err.find("line 2") != std::string::npos);
  fs::remove(laws);
  fs::remove(broken);
}

TEST_CASE("cli: realize then verify") {
  const Run r = mmpkit({"realize", "--dim", "5", "--seed", "3"}, std::string(fixtures::kSevenFive) + "\n");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 8);
  CHECK(ls[0].find("REALIZED seed=3") != std::string::npos);
  const fs::path diagram = temp_file("d.mmp", std::string(fixtures::kSevenFive) + "\n");
  std::string vec_text;
  for (std::size_t i = 1; i < ls.size(); ++i) vec_text += ls[i] + "\n";
  const fs::path vectors = temp_file("v.txt", vec_text);
  const Run v = mmpkit({"verify", diagram.string(), vectors.string()});
  CHECK(v.code == 0);
  CHECK(v.out == "VALID\n");

  const fs::path printed = temp_file("p.txt", fixtures::kSevenVectors);
  CHECK(mmpkit({"verify", diagram.string(), printed.string()}).out == "VALID\n");

  const fs::path bad = temp_file("b.txt", "a: 1 0 0 0 0\nb: 1 0 0 0 0\nc: 0 0 1 0 0\nd: 0 0 0 1 0\ne: 0 0 0 0 1\n"
                                          "f: 0 1 0 0 0\ng: 0 1 1 0 0\n");
  const Run inv = mmpkit({"--assert", "verify", diagram.string(), bad.string()});
  CHECK(inv.code == mmp::cli::kNegative);
  CHECK(lines(inv.out).at(0) == "INVALID");
  CHECK(inv.out.find("block 0: a.b = 1") != std::string::npos);

  const Run impossible = mmpkit({"realize", "--dim", "4", "--entries=-1,0,1"}, std::string(fixtures::kTenFive) + "\n");
  CHECK(impossible.out.find("IMPOSSIBLE (candidate space exhausted)") != std::string::npos);
  for (const auto& p : {diagram, vectors, printed, bad}) fs::remove(p);
}
