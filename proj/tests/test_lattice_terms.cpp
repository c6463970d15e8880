#include <random>

#include "doctest.h"
#include "mmp/lattice_terms.hpp"
#include "test_support.hpp"

using namespace mmp;

namespace {

Term random_term(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"x", "y", "z", "w1"};
  const int pick = std::uniform_int_distribution<int>(0, depth > 0 ? 5 : 2)(rng);
  switch (pick) {
    case 0: return Term::var(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
    case 1: return std::uniform_int_distribution<int>(0, 1)(rng) ? Term::zero() : Term::one();
    case 2: return Term::var("x");
    case 3: return Term::ortho(random_term(rng, depth - 1));
    case 4: return Term::meet(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return Term::join(random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

std::size_t syntax_error_position(std::string_view text) {
  try {
    parse_statement(text);
  } catch (const StatementSyntaxError& e) {
    return e.position();
  }
  FAIL("expected a syntax error for ", text);
  return 0;
}

}  // namespace

TEST_CASE("parse: De Morgan statement") {
  const LatticeStatement s = parse_statement("(a v b)' = a' ^ b'");
  CHECK(s.relation == LatticeStatement::Relation::Equal);
  CHECK(s.lhs == Term::ortho(Term::join(Term::var("a"), Term::var("b"))));
  CHECK(s.rhs == Term::meet(Term::ortho(Term::var("a")), Term::ortho(Term::var("b"))));
  CHECK(s.variables() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse: relations, constants and precedence") {
  const LatticeStatement le = parse_statement("a =< b");
  CHECK(le.relation == LatticeStatement::Relation::LessEq);
  const LatticeStatement eq = parse_statement("a ^ b' = 0");
  CHECK(eq.relation == LatticeStatement::Relation::Equal);
  CHECK(eq.rhs == Term::zero());
  CHECK(eq.lhs == Term::meet(Term::var("a"), Term::ortho(Term::var("b"))));

  // meet binds tighter than join, complement tighter than both
  CHECK(parse_term("a v b ^ c") == Term::join(Term::var("a"), Term::meet(Term::var("b"), Term::var("c"))));
  CHECK(parse_term("a ^ b v c") == Term::join(Term::meet(Term::var("a"), Term::var("b")), Term::var("c")));
  CHECK(parse_term("a v b v c") == Term::join(Term::join(Term::var("a"), Term::var("b")), Term::var("c")));
  CHECK(parse_term("a''") == Term::ortho(Term::ortho(Term::var("a"))));
  CHECK(parse_term("(a v b)^1") == Term::meet(Term::join(Term::var("a"), Term::var("b")), Term::one()));
  CHECK(parse_term("v1 v v2") == Term::join(Term::var("v1"), Term::var("v2")));
}

TEST_CASE("parse: syntax errors carry positions") {
  CHECK(syntax_error_position("a ^ = b") == 4);
  CHECK(syntax_error_position("a b") == 2);
  CHECK(syntax_error_position("(a v b = c") == 7);
  CHECK(syntax_error_position("a = 2") == 4);
  CHECK(syntax_error_position("v = a") == 0);
  CHECK(syntax_error_position("a = b)") == 5);
  CHECK(syntax_error_position("a") == 1);
}

TEST_CASE("property: serializer round-trips") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    LatticeStatement s;
    s.lhs = random_term(rng, 4);
    s.rhs = random_term(rng, 4);
    s.relation = i % 2 ? LatticeStatement::Relation::LessEq : LatticeStatement::Relation::Equal;
    const std::string text = to_string(s);
    CHECK(parse_statement(text) == s);
    CHECK(to_string(parse_statement(text)) == text);
  }
  CHECK(to_string(parse_term("((a ^ b)) v (c)")) == "a ^ b v c");
  CHECK(to_string(parse_statement("a ^ (b v c) = (a ^ b)'")) == "a ^ (b v c) = (a ^ b)'");
}

TEST_CASE("statement files") {
  const auto v = parse_statement_file("# laws\n\n(x v y)' = x' ^ y'   # De Morgan\nx =< x v y\n");
  REQUIRE(v.size() == 2);
  CHECK(v[1].relation == LatticeStatement::Relation::LessEq);
  CHECK_THROWS_AS(parse_statement_file("x = x\nx ^ = y\n"), StatementSyntaxError);
}

TEST_CASE("holds_in: Boolean block and the two-block pasting") {
  const LatticeStatement dist = parse_statement("x ^ (y v z) = (x ^ y) v (x ^ z)");
  const auto b3 = build_lattice(parse_mmp("abc."));
  CHECK(holds_in(std::get<OmlLattice>(b3), dist).holds);

  const auto two = build_lattice(parse_mmp("abc,cde."));
  const OmlLattice& l = std::get<OmlLattice>(two);
  const StatementResult r = holds_in(l, dist);
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  CHECK(evaluate(l, dist.lhs, *r.witness) != evaluate(l, dist.rhs, *r.witness));

  // Oracle: the first failing assignment in lexicographic order.
  const auto n = static_cast<Element>(l.size());
  std::optional<std::map<std::string, Element>> first;
  std::uint64_t tried = 0;
  for (Element x = 0; x < n && !first; ++x)
    for (Element y = 0; y < n && !first; ++y)
      for (Element z = 0; z < n && !first; ++z) {
        ++tried;
        std::map<std::string, Element> a{{"x", x}, {"y", y}, {"z", z}};
        if (evaluate(l, dist.lhs, a) != evaluate(l, dist.rhs, a)) first = a;
      }
  CHECK(r.witness == first);
  CHECK(r.assignments == tried);

  CHECK(holds_in(l, parse_statement("x ^ x' = 0")).holds);
  CHECK(holds_in(l, parse_statement("x =< x v y")).holds);
  CHECK_FALSE(holds_in(l, parse_statement("x v y =< x")).holds);
  CHECK(holds_in(l, parse_statement("0 =< 1")).assignments == 1);
}

TEST_CASE("holds_in: budget errors state the required count") {
  const auto built = build_lattice(parse_mmp("abc,cde."));
  const OmlLattice& l = std::get<OmlLattice>(built);
  const LatticeStatement five = parse_statement("a ^ b ^ c ^ d ^ e = a ^ b ^ c ^ d ^ e");
  try {
    holds_in(l, five);
    FAIL("expected a budget error");
  } catch (const EvalBudgetExceeded& e) {
    CHECK(std::string(e.what()).find("12^5 = 248832") != std::string::npos);
  }
  EvalBudget wide;
  wide.max_variables = 5;
  CHECK(holds_in(l, five, wide).holds);
  EvalBudget tight;
  tight.max_assignments = 100;
  CHECK_THROWS_AS(holds_in(l, parse_statement("x = y"), tight), EvalBudgetExceeded);
}
