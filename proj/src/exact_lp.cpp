#include "mmp/exact_lp.hpp"

#include <stdexcept>

namespace mmp {

namespace {

// Dense tableau: rows_ m x (cols + 1), last column holds the right-hand side.
// cost_ holds reduced costs, cost_[cols] the negated objective value.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols)
      : m_(m), cols_(cols), rows_(m, std::vector<Rational>(cols + 1)), cost_(cols + 1), basis_(m) {}

  Rational& at(std::size_t i, std::size_t j) { return rows_[i][j]; }
  Rational& rhs(std::size_t i) { return rows_[i][cols_]; }
  Rational& cost(std::size_t j) { return cost_[j]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return m_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = rows_[r][c];
    for (auto& x : rows_[r]) x /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(rows_[i][c]) == 0) continue;
      const Rational f = rows_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(rows_[r][j]) != 0) rows_[i][j] -= f * rows_[r][j];
      }
    }
    if (sgn(cost_[c]) != 0) {
      const Rational f = cost_[c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(rows_[r][j]) != 0) cost_[j] -= f * rows_[r][j];
      }
    }
    basis_[r] = c;
  }

  // Bland's rule over columns [0, limit). Returns false when unbounded.
  bool optimize(std::size_t limit) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(cost_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variables;
  const std::size_t m = lp.rows.size();
  if (lp.rhs.size() != m) throw std::invalid_argument("rhs size does not match row count");
  if (!lp.objective.empty() && lp.objective.size() != n) {
    throw std::invalid_argument("objective size does not match variable count");
  }

  // Phase 1: artificial variable per row, rows flipped so that b >= 0.
  Tableau t(m, n + m);
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].size() != n) throw std::invalid_argument("row size does not match variable count");
    sign[i] = sgn(lp.rhs[i]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * lp.rows[i][j];
    t.at(i, n + i) = 1;
    t.rhs(i) = sign[i] * lp.rhs[i];
    t.basis(i) = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational s;
    for (std::size_t i = 0; i < m; ++i) s -= t.at(i, j);
    t.cost(j) = s;
  }
  {
    Rational s;
    for (std::size_t i = 0; i < m; ++i) s -= t.rhs(i);
    t.cost(n + m) = s;
  }
  t.optimize(n + m);

  LpResult result;
  if (sgn(t.cost(n + m)) != 0) {
    // Reduced cost of artificial i is 1 - y_i for the phase-1 duals y.
    result.status = LpStatus::Infeasible;
    result.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) result.farkas[i] = sign[i] * (1 - t.cost(n + i));
    return result;
  }

  // Drive remaining artificials out of the basis or drop redundant rows.
  for (std::size_t i = 0; i < t.rows();) {
    if (t.basis(i) < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(t.at(i, j)) != 0) {
        col = j;
        break;
      }
    }
    if (col == n) {
      t.drop_row(i);
    } else {
      t.pivot(i, col);
      ++i;
    }
  }

  // Phase 2 over the original columns only.
  for (std::size_t j = 0; j <= n + m; ++j) t.cost(j) = 0;
  if (!lp.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) t.cost(j) = lp.objective[j];
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const Rational cb = lp.objective[t.basis(i)];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) t.cost(j) -= cb * t.at(i, j);
      t.cost(n + m) -= cb * t.rhs(i);
    }
  }
  if (!t.optimize(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows(); ++i) result.x[t.basis(i)] = t.rhs(i);
  for (std::size_t j = 0; j < n && !lp.objective.empty(); ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<Rational>& y) {
  if (y.size() != lp.rows.size()) return false;
  for (std::size_t j = 0; j < lp.variables; ++j) {
    Rational s;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rows[i][j];
    if (sgn(s) > 0) return false;
  }
  Rational s;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rhs[i];
  return sgn(s) > 0;
}

}  // namespace mmp
