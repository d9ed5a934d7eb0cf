#pragma once

#include <vector>

#include "fgordon/rational.hpp"

namespace fgordon {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

/// Rank by fraction-free (Bareiss) elimination over the integers after
/// clearing row denominators.
int rank_bareiss(QMatrix a);

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(QMatrix& a);

/// Canonical nullspace basis of A (one vector per free column, pivot
/// entries back-substituted, free entry set to 1).
std::vector<QVector> nullspace(const QMatrix& a, int cols);

struct LinearSolution {
  bool consistent = false;
  QVector particular;            // one solution of A x = b
  std::vector<QVector> kernel;   // basis of A x = 0
};

/// Exact solve of A x = b (A given as rows).
LinearSolution solve_linear(const QMatrix& a, const QVector& b);

}  // namespace fgordon
