#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgordon/jetgeom.hpp"

namespace fgordon {

/// First-order Lagrangian, either free-form L(x,y,u,u_x,u_y) or in the
/// structured shape L = -(R_{ab} u^b_x u^a_y + Q_a u^a_x + P_a u^a_y + N)
/// with R, Q, P, N functions of (x,y,u).
struct StructuredLagrangian {
  ExprMat R;
  ExprVec Q;
  ExprVec P;
  Expression N;
};

struct Lagrangian {
  std::optional<Expression> freeform;
  std::optional<StructuredLagrangian> structured;

  static Lagrangian from_expression(Expression L);
  /// Validates that all component entries depend on (x,y,u) only.
  static Lagrangian from_structured(StructuredLagrangian s);

  Expression expand(int m) const;
};

/// E_a(L) = dL/du^a - D_x(dL/du^a_x) - D_y(dL/du^a_y) with unconstrained
/// total derivatives (u_xy, u_xx, u_yy free coordinates).  Throws
/// std::invalid_argument when L is not first order.
ExprVec euler_lagrange(const Lagrangian& L, int m);

struct VerifyResult {
  bool ok = false;
  Certainty certainty = Certainty::Exact;
  ExprVec residuals;  // E_a(L) - M_{ab}(u^b_xy - f^b), kept for reporting
};

/// Off-shell check of the multiplier identity, u_xy treated as a free
/// coordinate.
VerifyResult verify_multiplier(const Lagrangian& L, const ExprMat& M,
                               const FGordonSystem& sys);

struct ConstructionResult {
  bool ok = false;
  Lagrangian lagrangian;
  std::string message;
  int degree_cap = 4;
  int residual_constraints = 0;  // diagnostic when the ansatz fails
};

/// Builds a Lagrangian for a verified multiplier M: symmetric part of R is
/// pinned to M/2; the skew part of R and Q, P, N are undetermined
/// polynomial ansatz functions in (x,y,u) (extended by the system's opaque
/// atoms).  The skew part starts at zero and is widened only when needed.
/// Any solution is re-verified through verify_multiplier before return.
ConstructionResult construct_lagrangian(const ExprMat& M, FGordonSystem& sys,
                                        int degree_cap = 4);

/// Null-Lagrangian test: L1 and L2 differ by a total divergence iff
/// E(L1 - L2) vanishes identically.  First-order inputs only.
ZeroResult divergence_equivalent(const Lagrangian& l1, const Lagrangian& l2,
                                 int m);

}  // namespace fgordon
