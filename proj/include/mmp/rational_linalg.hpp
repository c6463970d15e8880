#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "mmp/exact_lp.hpp"

namespace mmp {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t columns);

/// Basis of {x : m x = 0} for an r x columns matrix, one vector per free column.
std::vector<RationalVector> null_space(const RationalMatrix& m, std::size_t columns);

std::size_t rank(const RationalMatrix& m, std::size_t columns);

Rational dot(const RationalVector& a, const RationalVector& b);

bool is_zero(const RationalVector& v);

/// Positive-rational multiple with coprime integer entries whose first
/// nonzero entry is positive. Returns the zero vector unchanged.
RationalVector primitive(const RationalVector& v);

}  // namespace mmp
