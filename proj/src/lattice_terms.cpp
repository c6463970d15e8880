#include "mmp/lattice_terms.hpp"

#include <cctype>

namespace mmp {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  LatticeStatement statement() {
    LatticeStatement st;
    st.lhs = join();
    skip();
    if (peek() == '=' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '<') {
      pos_ += 2;
      st.relation = LatticeStatement::Relation::LessEq;
    } else if (peek() == '=') {
      ++pos_;
    } else {
      fail("expected '=' or '=<'");
    }
    st.rhs = join();
    end();
    return st;
  }

  Term term_only() {
    Term t = join();
    end();
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& what) const { throw StatementSyntaxError(what, pos_); }
  void end() {
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  // Reads the identifier at the cursor without consuming it.
  std::string_view word() const {
    std::size_t e = pos_;
    while (e < s_.size() && ident_char(s_[e])) ++e;
    return s_.substr(pos_, e - pos_);
  }

  bool at_join() {
    skip();
    return word() == "v";
  }

  Term join() {
    Term t = meet();
    while (at_join()) {
      ++pos_;
      t = Term::join(std::move(t), meet());
    }
    return t;
  }

  Term meet() {
    Term t = postfix();
    for (skip(); peek() == '^'; skip()) {
      ++pos_;
      t = Term::meet(std::move(t), postfix());
    }
    return t;
  }

  Term postfix() {
    Term t = primary();
    for (skip(); peek() == '\''; skip()) {
      ++pos_;
      t = Term::ortho(std::move(t));
    }
    return t;
  }

  Term primary() {
    skip();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Term t = join();
      skip();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    if (c == '\0') fail("unexpected end of input");
    if (!ident_char(c)) fail("unexpected '" + std::string(1, c) + "'");
    const std::string_view w = word();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (w == "0" || w == "1") {
        pos_ += w.size();
        return w == "0" ? Term::zero() : Term::one();
      }
      fail("constants are 0 and 1, got '" + std::string(w) + "'");
    }
    if (w == "v") fail("'v' is the join operator, not a variable");
    pos_ += w.size();
    return Term::var(std::string(w));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int precedence(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Join: return 1;
    case Term::Kind::Meet: return 2;
    case Term::Kind::Ortho: return 3;
    default: return 4;
  }
}

void write(const Term& t, int min_prec, std::string& out) {
  const int p = precedence(t);
  const bool paren = p < min_prec;
  if (paren) out += '(';
  switch (t.kind) {
    case Term::Kind::Var: out += t.name; break;
    case Term::Kind::Zero: out += '0'; break;
    case Term::Kind::One: out += '1'; break;
    case Term::Kind::Ortho:
      write(t.args[0], 3, out);
      out += '\'';
      break;
    case Term::Kind::Meet:
    case Term::Kind::Join:
      write(t.args[0], p, out);
      out += t.kind == Term::Kind::Meet ? " ^ " : " v ";
      write(t.args[1], p + 1, out);
      break;
  }
  if (paren) out += ')';
}

void collect(const Term& t, std::vector<std::string>& names) {
  if (t.kind == Term::Kind::Var) {
    for (const auto& n : names) {
      if (n == t.name) return;
    }
    names.push_back(t.name);
  }
  for (const Term& a : t.args) collect(a, names);
}

// Variables resolved to slots once, so the inner loop avoids map lookups.
Element eval_slots(const OmlLattice& l, const Term& t, const std::vector<std::string>& names,
                   const std::vector<Element>& values) {
  switch (t.kind) {
    case Term::Kind::Var:
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == t.name) return values[i];
      }
      throw std::invalid_argument("unassigned variable " + t.name);
    case Term::Kind::Zero: return l.zero();
    case Term::Kind::One: return l.one();
    case Term::Kind::Ortho: return l.ortho(eval_slots(l, t.args[0], names, values));
    case Term::Kind::Meet:
      return l.meet(eval_slots(l, t.args[0], names, values), eval_slots(l, t.args[1], names, values));
    case Term::Kind::Join:
      return l.join(eval_slots(l, t.args[0], names, values), eval_slots(l, t.args[1], names, values));
  }
  return l.zero();
}

}  // namespace

std::vector<std::string> LatticeStatement::variables() const {
  std::vector<std::string> names;
  collect(lhs, names);
  collect(rhs, names);
  return names;
}

LatticeStatement parse_statement(std::string_view text) { return Parser(text).statement(); }
Term parse_term(std::string_view text) { return Parser(text).term_only(); }

std::string to_string(const Term& t) {
  std::string out;
  write(t, 0, out);
  return out;
}

std::string to_string(const LatticeStatement& s) {
  return to_string(s.lhs) + (s.relation == LatticeStatement::Relation::Equal ? " = " : " =< ") + to_string(s.rhs);
}

std::vector<LatticeStatement> parse_statement_file(std::string_view text) {
  std::vector<LatticeStatement> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse_statement(line));
    } catch (const StatementSyntaxError& e) {
      throw StatementSyntaxError("line " + std::to_string(line_no) + ": " + e.what(), e.position());
    }
  }
  return out;
}

Element evaluate(const OmlLattice& l, const Term& t, const std::map<std::string, Element>& assignment) {
  std::vector<std::string> names;
  std::vector<Element> values;
  for (const auto& [k, v] : assignment) {
    names.push_back(k);
    values.push_back(v);
  }
  return eval_slots(l, t, names, values);
}

StatementResult holds_in(const OmlLattice& l, const LatticeStatement& s, const EvalBudget& budget) {
  const auto names = s.variables();
  const std::size_t n = l.size();
  std::uint64_t required = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (required > budget.max_assignments / n + 1) overflow = true;
    required *= n;
  }
  if (names.size() > budget.max_variables || overflow || required > budget.max_assignments) {
    throw EvalBudgetExceeded("statement needs " + std::to_string(n) + "^" + std::to_string(names.size()) +
                             (overflow ? "" : " = " + std::to_string(required)) + " assignments over " +
                             std::to_string(names.size()) + " variables; budget is " +
                             std::to_string(budget.max_variables) + " variables and " +
                             std::to_string(budget.max_assignments) + " assignments");
  }
  StatementResult result;
  std::vector<Element> values(names.size(), 0);
  while (true) {
    ++result.assignments;
    const Element a = eval_slots(l, s.lhs, names, values);
    const Element b = eval_slots(l, s.rhs, names, values);
    const bool ok = s.relation == LatticeStatement::Relation::Equal ? a == b : l.leq(a, b);
    if (!ok) {
      result.holds = false;
      std::map<std::string, Element> w;
      for (std::size_t i = 0; i < names.size(); ++i) w[names[i]] = values[i];
      result.witness = std::move(w);
      return result;
    }
    std::size_t i = names.size();
    while (i > 0 && static_cast<std::size_t>(++values[i - 1]) == n) values[--i] = 0;
    if (i == 0) break;
  }
  return result;
}

}  // namespace mmp
