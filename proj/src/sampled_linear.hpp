#pragma once

// Exact solver for large linear systems whose equations are expression
// identities linear in the unknowns:  sum_j (sum of coeff*basis products)
// c_j + rhs == 0  identically in the coordinates.  Rows are generated by
// exact rational evaluation at random points until the rank stabilizes, so
// no symbolic arithmetic in the unknowns is ever performed.  The kernel of
// the sampled system contains the identity kernel and coincides with it
// with overwhelming probability; callers re-verify candidates symbolically.

#include <cstdint>
#include <vector>

#include "fgordon/linalg.hpp"
#include "fgordon/symexpr.hpp"

namespace fgordon::detail {

struct LinTerm {
  int col = 0;
  int coeff_id = -1;  // -1 means the constant 1
  int basis_id = -1;  // -1 means the constant 1
};

struct LinCondition {
  std::vector<LinTerm> terms;
  int rhs_id = -1;  // index into coeffs; -1 for homogeneous
};

struct LinProblem {
  int cols = 0;
  std::vector<Expression> coeffs;
  std::vector<Expression> basis;
  std::vector<LinCondition> conds;
  bool want_kernel = true;  // skip kernel lifting when only a particular
                            // solution is needed
};

LinearSolution solve_by_sampling(const LinProblem& p, std::uint64_t seed);

}  // namespace fgordon::detail
