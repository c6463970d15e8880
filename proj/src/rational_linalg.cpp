#include "mmp/rational_linalg.hpp"

namespace mmp {

std::vector<std::size_t> rref(RationalMatrix& m, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < columns; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j < columns; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<RationalVector> null_space(const RationalMatrix& m, std::size_t columns) {
  RationalMatrix r = m;
  const auto pivots = rref(r, columns);
  std::vector<char> is_pivot(columns, 0);
  for (std::size_t c : pivots) is_pivot[c] = 1;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < columns; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(columns, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(const RationalMatrix& m, std::size_t columns) {
  RationalMatrix r = m;
  return rref(r, columns).size();
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const RationalVector& v) {
  for (const Rational& x : v) {
    if (x != 0) return false;
  }
  return true;
}

RationalVector primitive(const RationalVector& v) {
  if (is_zero(v)) return v;
  mpz_class lcm = 1;
  for (const Rational& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const Rational& x : v) {
    mpz_class k = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
    ints.push_back(std::move(k));
  }
  int sign = 0;
  for (const auto& k : ints) {
    if (k != 0) {
      sign = sgn(k);
      break;
    }
  }
  RationalVector out;
  out.reserve(ints.size());
  for (const auto& k : ints) out.emplace_back(mpz_class(sign * k / g));
  return out;
}

}  // namespace mmp
