#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace mmp {

using Rational = mpq_class;

/// minimize c.x subject to A x = b, x >= 0, over the rationals.
struct LinearProgram {
  std::size_t variables = 0;
  std::vector<std::vector<Rational>> rows;  // A, one row per equality
  std::vector<Rational> rhs;                // b
  std::vector<Rational> objective;          // c; empty means pure feasibility

  void add_equality(std::vector<Rational> row, Rational value) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(value));
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;   // optimal basic solution when Optimal
  Rational value;            // c.x when Optimal
  /// When Infeasible: y with y^T A <= 0 componentwise and y^T b > 0.
  std::vector<Rational> farkas;
};

/// Two-phase primal simplex on a dense rational tableau with Bland's rule,
/// so it always terminates and every verdict is exact.
LpResult solve_lp(const LinearProgram& lp);

/// Checks an infeasibility certificate independently of the solver.
bool verify_farkas(const LinearProgram& lp, const std::vector<Rational>& y);

}  // namespace mmp
