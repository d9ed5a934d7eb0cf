#include "fgordon/linalg.hpp"

#include <cassert>
#include <stdexcept>

namespace fgordon {

int rank_bareiss(QMatrix a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  // Clear denominators row by row; rank is scale invariant.
  std::vector<std::vector<Integer>> z(rows, std::vector<Integer>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    Integer lcm(1);
    for (std::size_t c = 0; c < cols; ++c)
      lcm = lcm * a[r][c].get_den() / gcd(lcm, Integer(a[r][c].get_den()));
    for (std::size_t c = 0; c < cols; ++c) {
      Rational scaled = a[r][c] * Rational(lcm);
      scaled.canonicalize();
      assert(scaled.get_den() == 1);
      z[r][c] = scaled.get_num();
    }
  }
  Integer prev(1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && z[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(z[piv], z[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        Integer t = z[rank][col] * z[r][c] - z[r][col] * z[rank][c];
        if (t % prev != 0)
          throw std::logic_error("bareiss: inexact division");
        z[r][c] = t / prev;
      }
      z[r][col] = 0;
    }
    prev = z[rank][col];
    ++rank;
  }
  return static_cast<int>(rank);
}

std::vector<int> rref(QMatrix& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows; ++col) {
    std::size_t piv = lead;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[lead]);
    Rational inv = Rational(1) / a[lead][col];
    for (std::size_t c = col; c < cols; ++c) a[lead][c] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[lead][c];
    }
    pivots.push_back(static_cast<int>(col));
    ++lead;
  }
  return pivots;
}

std::vector<QVector> nullspace(const QMatrix& a, int cols) {
  QMatrix m = a;
  if (m.empty()) m.push_back(QVector(static_cast<std::size_t>(cols), 0));
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<QVector> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    QVector v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v[static_cast<std::size_t>(pivots[i])] =
          -m[i][static_cast<std::size_t>(free)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

LinearSolution solve_linear(const QMatrix& a, const QVector& b) {
  LinearSolution out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  if (rows == 0) {
    out.consistent = true;
    return out;
  }
  QMatrix aug(rows, QVector(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug[r][c] = a[r][c];
    aug[r][cols] = b[r];
  }
  std::vector<int> pivots = rref(aug);
  for (int p : pivots)
    if (p == static_cast<int>(cols)) return out;  // inconsistent
  out.consistent = true;
  out.particular.assign(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i)
    out.particular[static_cast<std::size_t>(pivots[i])] = aug[i][cols];
  QMatrix hom(rows, QVector(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) hom[r][c] = a[r][c];
  out.kernel = nullspace(hom, static_cast<int>(cols));
  return out;
}

}  // namespace fgordon
