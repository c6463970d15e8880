#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmp/lattice.hpp"

namespace mmp {

/// Lattice polynomial: variables, 0, 1, binary meet/join, postfix complement.
struct Term {
  enum class Kind { Var, Zero, One, Meet, Join, Ortho };
  Kind kind = Kind::Zero;
  std::string name;        // Var only
  std::vector<Term> args;  // two for Meet/Join, one for Ortho

  static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static Term zero() { return {Kind::Zero, {}, {}}; }
  static Term one() { return {Kind::One, {}, {}}; }
  static Term meet(Term a, Term b) { return {Kind::Meet, {}, {std::move(a), std::move(b)}}; }
  static Term join(Term a, Term b) { return {Kind::Join, {}, {std::move(a), std::move(b)}}; }
  static Term ortho(Term a) { return {Kind::Ortho, {}, {std::move(a)}}; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct LatticeStatement {
  enum class Relation { Equal, LessEq };
  Relation relation = Relation::Equal;
  Term lhs;
  Term rhs;

  /// Distinct variable names, in order of first appearance.
  std::vector<std::string> variables() const;
  friend bool operator==(const LatticeStatement&, const LatticeStatement&) = default;
};

class StatementSyntaxError : public std::runtime_error {
 public:
  StatementSyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at column " + std::to_string(position + 1)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Grammar: `^` meet, `v` join, postfix `'` complement, constants 0 and 1,
/// identifiers, parentheses; relation `=` or `=<`. Precedence: complement,
/// then meet, then join; both binary operators associate to the left.
/// The identifier "v" is reserved for join.
LatticeStatement parse_statement(std::string_view text);
Term parse_term(std::string_view text);

/// Minimal parentheses; parse_statement(to_string(s)) == s.
std::string to_string(const Term& t);
std::string to_string(const LatticeStatement& s);

/// One statement per line; blank lines and `#` comments skipped.
std::vector<LatticeStatement> parse_statement_file(std::string_view text);

Element evaluate(const OmlLattice& l, const Term& t, const std::map<std::string, Element>& assignment);

struct EvalBudget {
  std::size_t max_variables = 4;
  std::uint64_t max_assignments = 100'000'000;
};

class EvalBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StatementResult {
  bool holds = true;
  /// First failing assignment in lexicographic order.
  std::optional<std::map<std::string, Element>> witness;
  std::uint64_t assignments = 0;
};

/// Exhaustive evaluation over all assignments of the statement's variables.
/// Throws EvalBudgetExceeded, naming the required assignment count, when
/// the statement is over budget.
StatementResult holds_in(const OmlLattice& l, const LatticeStatement& s, const EvalBudget& budget = {});

}  // namespace mmp
