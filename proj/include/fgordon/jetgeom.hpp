#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgordon/symexpr.hpp"

namespace fgordon {

using ExprVec = std::vector<Expression>;
using ExprMat = std::vector<ExprVec>;
using ExprTensor3 = std::vector<ExprMat>;
using ExprTensor4 = std::vector<ExprTensor3>;

ExprMat expr_matrix(int rows, int cols);
ExprTensor3 expr_tensor3(int a, int b, int c);

/// Coefficients of the normal form
///   u^a_xy + C^a_{bg} u^b_x u^g_y + A^a_g u^g_x + B^a_g u^g_y + E^a = 0,
/// all entries functions of (x, y, u) only.  Indexing: C[a][b][g], A[a][g].
struct NormalForm {
  ExprTensor3 C;
  ExprMat A;
  ExprMat B;
  ExprVec E;
};

/// A system u^a_xy = f^a(x, y, u, u_x, u_y), a = 1..m.
struct FGordonSystem {
  int m = 0;
  ExprVec f;
  NameTable names;
  std::optional<NormalForm> normal_form;

  const Expression& rhs(int a) const {
    return f[static_cast<std::size_t>(a - 1)];
  }
};

/// Validates shape: m >= 1, m right-hand sides free of second-order jets.
FGordonSystem make_system(int m, ExprVec f, NameTable names);

/// The three basic invariants.  H[g][a] = H^g_a, K[g][a] = K^g_a,
/// S[g][a][b] = S^g_{ab} (antisymmetric in a, b).
struct InvariantTriple {
  ExprMat H;
  ExprMat K;
  ExprTensor3 S;
};

/// The matrix one-form governing the differential condition on multipliers:
/// entries of du[s][a][t] multiply du^t, dy[s][a] multiplies dy, dx[s][a]
/// multiplies dx; all functions of (x, y, u).
struct ConnectionForm {
  int m = 0;
  ExprTensor3 du;  // du[s][a][t] = C^s_{at}
  ExprMat dy;      // dy[s][a] = A^s_a
  ExprMat dx;      // dx[s][a] = B^s_a
  bool is_zero_form() const;
};

/// Tests the two second-derivative conditions that any first-order
/// multiplier forces on f, and reads off the normal-form coefficients when
/// they hold.  Returns nullopt when the system cannot carry a first-order
/// variational multiplier; the result is cached on the system.
std::optional<NormalForm> check_normal_form(FGordonSystem& sys);

/// H, K, S computed from the general first-order formulas, fully
/// normalized.  When a normal form is present, the guaranteed cancellation
/// of second-order jet terms in H and K is asserted.
InvariantTriple invariants(const FGordonSystem& sys);

ConnectionForm connection_form(FGordonSystem& sys);  // throws if no normal form

inline Expression total_derivative(const Expression& e, Direction dir,
                                   const FGordonSystem& sys) {
  return total_derivative(e, dir, std::span<const Expression>(sys.f));
}

/// Exponent vector over the gradient slots (u^1_x, u^1_y, ..., u^m_x,
/// u^m_y).
struct GradMonomial {
  std::vector<int> exps;

  int total_degree() const;
  bool operator==(const GradMonomial& o) const { return exps == o.exps; }
  std::string print(const NameTable& names) const;
};

/// Fixed enumeration order: total degree first, then within a degree the
/// slot order above with earlier slots dominating.  This order defines row
/// order in the algebraic systems and keeps reports reproducible.
bool grad_monomial_less(const GradMonomial& a, const GradMonomial& b);

/// Coefficient extraction of an expression polynomial in the gradient
/// coordinates; the returned coefficients depend on the remaining
/// coordinates only and sum back to e.  Throws std::invalid_argument on
/// non-polynomial gradient dependence.
std::vector<std::pair<GradMonomial, Expression>> gradient_coefficients(
    const Expression& e, int m);

/// Curvature tensor of a symmetric connection Gamma[g][a][b] (entries
/// functions of u only), with the index convention fixed by the identity
///   H[g][a] == sum_{e,t} R[g][t][e][a] * u^e_x * u^t_y
/// for the geodesic-type system u^a_xy + Gamma^a_{bg} u^b_x u^g_y = 0.
/// Asymmetric connections are rejected.
ExprTensor4 curvature(const ExprTensor3& gamma);

/// The contraction on the right-hand side of the identity above.
ExprMat curvature_contraction(const ExprTensor4& r);

}  // namespace fgordon
