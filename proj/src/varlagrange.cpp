#include "fgordon/varlagrange.hpp"

#include <sstream>
#include <stdexcept>

#include "fgordon/multspace.hpp"
#include "sampled_linear.hpp"

namespace fgordon {

namespace {

void require_first_order(const Expression& e, const char* who) {
  if (e.contains_kind(CoordKind::Uxx) || e.contains_kind(CoordKind::Uxy) ||
      e.contains_kind(CoordKind::Uyy))
    throw std::invalid_argument(std::string(who) +
                                ": Lagrangian must be first order");
}

void require_point_function(const Expression& e, const char* who) {
  for (int key : e.coordinate_keys()) {
    Coordinate c = coord_from_key(key);
    if (c.kind != CoordKind::X && c.kind != CoordKind::Y &&
        c.kind != CoordKind::U)
      throw std::invalid_argument(std::string(who) +
                                  ": entries must depend on (x,y,u) only");
  }
}

}  // namespace

Lagrangian Lagrangian::from_expression(Expression L) {
  require_first_order(L, "Lagrangian");
  Lagrangian out;
  out.freeform = std::move(L);
  return out;
}

Lagrangian Lagrangian::from_structured(StructuredLagrangian s) {
  for (const auto& row : s.R)
    for (const auto& e : row) require_point_function(e, "Lagrangian.R");
  for (const auto& e : s.Q) require_point_function(e, "Lagrangian.Q");
  for (const auto& e : s.P) require_point_function(e, "Lagrangian.P");
  require_point_function(s.N, "Lagrangian.N");
  Lagrangian out;
  out.structured = std::move(s);
  return out;
}

Expression Lagrangian::expand(int m) const {
  if (freeform) return *freeform;
  if (!structured) return Expression();
  const StructuredLagrangian& s = *structured;
  Expression L;
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b)
      L += s.R[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] *
           Expression::coordinate(Coordinate::ux(b)) *
           Expression::coordinate(Coordinate::uy(a));
    L += s.Q[static_cast<std::size_t>(a - 1)] *
         Expression::coordinate(Coordinate::ux(a));
    L += s.P[static_cast<std::size_t>(a - 1)] *
         Expression::coordinate(Coordinate::uy(a));
  }
  L += s.N;
  return -L;
}

ExprVec euler_lagrange(const Lagrangian& lag, int m) {
  Expression L = lag.expand(m);
  require_first_order(L, "euler_lagrange");
  ExprVec E(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    Expression e = L.partial(Coordinate::u(a));
    e -= total_derivative_free(L.partial(Coordinate::ux(a)), Direction::X, m);
    e -= total_derivative_free(L.partial(Coordinate::uy(a)), Direction::Y, m);
    E[static_cast<std::size_t>(a - 1)] = e;
  }
  return E;
}

VerifyResult verify_multiplier(const Lagrangian& L, const ExprMat& M,
                               const FGordonSystem& sys) {
  const int m = sys.m;
  ExprVec E = euler_lagrange(L, m);
  VerifyResult out;
  out.ok = true;
  for (int a = 1; a <= m; ++a) {
    Expression r = E[static_cast<std::size_t>(a - 1)];
    for (int b = 1; b <= m; ++b)
      r -= M[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] *
           (Expression::coordinate(Coordinate::uxy(b)) - sys.rhs(b));
    ZeroResult z = is_zero(r);
    if (!z.zero) out.ok = false;
    if (z.certainty == Certainty::Probabilistic &&
        out.certainty == Certainty::Exact)
      out.certainty = Certainty::Probabilistic;
    if (z.certainty == Certainty::Indeterminate)
      out.certainty = Certainty::Indeterminate;
    out.residuals.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction by undetermined coefficients
// ---------------------------------------------------------------------------

namespace {

// Multiplier admissibility: the algebraic and differential conditions that
// the construction presupposes.
bool multiplier_admissible(const ExprMat& M, FGordonSystem& sys) {
  const int m = sys.m;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      require_point_function(M[static_cast<std::size_t>(a)]
                              [static_cast<std::size_t>(b)],
                             "multiplier");
      if (!is_zero(M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                   M[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])
               .zero)
        return false;
    }
  if (!check_normal_form(sys)) return false;
  InvariantTriple inv = invariants(sys);
  auto at = [&M](int a, int b) -> const Expression& {
    return M[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)];
  };
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      Expression hk;
      for (int s = 1; s <= m; ++s)
        hk += at(a, s) * inv.H[s - 1][b - 1] - at(b, s) * inv.K[s - 1][a - 1];
      if (!is_zero(hk).zero) return false;
      for (int g = 1; g <= m; ++g) {
        Expression sc;
        for (int s = 1; s <= m; ++s)
          sc += at(a, s) * inv.S[s - 1][b - 1][g - 1] +
                at(b, s) * inv.S[s - 1][a - 1][g - 1];
        if (!is_zero(sc).zero) return false;
      }
    }
  ConnectionForm omega = connection_form(sys);
  for (int a = 1; a <= m; ++a)
    for (int b = a; b <= m; ++b)
      for (int dir = 0; dir < 2 + m; ++dir) {
        Coordinate dc = dir == 0   ? Coordinate::x()
                        : dir == 1 ? Coordinate::y()
                                   : Coordinate::u(dir - 1);
        Expression v = at(a, b).partial(dc);
        for (int s = 1; s <= m; ++s) {
          const Expression& oa = dir == 0   ? omega.dx[s - 1][b - 1]
                                 : dir == 1 ? omega.dy[s - 1][b - 1]
                                            : omega.du[s - 1][b - 1][dir - 2];
          const Expression& ob = dir == 0   ? omega.dx[s - 1][a - 1]
                                 : dir == 1 ? omega.dy[s - 1][a - 1]
                                            : omega.du[s - 1][a - 1][dir - 2];
          v -= at(a, s) * oa + at(b, s) * ob;
        }
        if (!is_zero(v).zero) return false;
      }
  return true;
}

std::vector<Expression> point_function_basis(const FGordonSystem& sys,
                                             int degree_cap) {
  const int m = sys.m;
  std::vector<Expression> vars;
  vars.push_back(Expression::coordinate(Coordinate::x()));
  vars.push_back(Expression::coordinate(Coordinate::y()));
  for (int a = 1; a <= m; ++a)
    vars.push_back(Expression::coordinate(Coordinate::u(a)));
  std::vector<Expression> monos{Expression::from_int(1)};
  std::vector<Expression> frontier{Expression::from_int(1)};
  NameTable names = default_names(m);
  for (int d = 1; d <= degree_cap; ++d) {
    std::vector<Expression> next;
    std::set<std::string> dedup;
    for (const auto& f : frontier)
      for (const auto& v : vars) {
        Expression e = f * v;
        if (dedup.insert(to_string(e, names)).second) next.push_back(e);
      }
    for (const auto& e : next) monos.push_back(e);
    frontier = std::move(next);
  }
  std::vector<std::pair<FuncKind, Expression>> atoms;
  for (const auto& f : sys.f)
    for (auto& [kind, arg] : f.function_atoms()) {
      bool dup = false;
      for (auto& [k2, a2] : atoms)
        if (k2 == kind && Expression::compare(a2, arg) == 0) dup = true;
      if (!dup) atoms.emplace_back(kind, arg);
    }
  std::vector<Expression> out = monos;
  for (const auto& [kind, arg] : atoms) {
    Expression atom = Expression::apply(kind, arg);
    for (const auto& mono : monos) out.push_back(atom * mono);
  }
  return out;
}

}  // namespace

ConstructionResult construct_lagrangian(const ExprMat& M, FGordonSystem& sys,
                                        int degree_cap) {
  const int m = sys.m;
  ConstructionResult out;
  out.degree_cap = degree_cap;
  if (!multiplier_admissible(M, sys)) {
    out.message = "the candidate does not satisfy the multiplier conditions";
    return out;
  }
  const int nskew = m * (m - 1) / 2;

  // E(L) is linear in L, so the whole identity splits into the fixed part
  // (R = M/2) and one Euler-Lagrange vector per unit ansatz function.
  StructuredLagrangian fixed;
  fixed.R = expr_matrix(m, m);
  Expression half = Expression::from_rational(Rational(1, 2));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      fixed.R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * half;
  fixed.Q.assign(static_cast<std::size_t>(m), Expression());
  fixed.P.assign(static_cast<std::size_t>(m), Expression());
  Lagrangian fixed_lag;
  fixed_lag.structured = fixed;
  ExprVec e_fixed = euler_lagrange(fixed_lag, m);

  // Unit Lagrangian for ansatz slot `which`: Q_1..Q_m, P_1..P_m, N, skew.
  auto unit_lagrangian = [&](int which, const Expression& phi) {
    StructuredLagrangian s;
    s.R = expr_matrix(m, m);
    s.Q.assign(static_cast<std::size_t>(m), Expression());
    s.P.assign(static_cast<std::size_t>(m), Expression());
    if (which < m) {
      s.Q[static_cast<std::size_t>(which)] = phi;
    } else if (which < 2 * m) {
      s.P[static_cast<std::size_t>(which - m)] = phi;
    } else if (which == 2 * m) {
      s.N = phi;
    } else {
      int sk = which - (2 * m + 1);
      int a = 0, b = 0, seen = 0;
      for (a = 0; a < m && !b; ++a)
        for (int bb = a + 1; bb < m; ++bb)
          if (seen++ == sk) {
            b = bb;
            break;
          }
      --a;
      s.R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = phi;
      s.R[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = -phi;
    }
    Lagrangian l;
    l.structured = std::move(s);
    return l;
  };

  auto attempt = [&](const std::vector<Expression>& basis, bool with_skew)
      -> std::optional<QVector> {
    const int nb = static_cast<int>(basis.size());
    int nfuncs = 2 * m + 1 + (with_skew ? nskew : 0);
    detail::LinProblem prob;
    prob.cols = nfuncs * nb;
    prob.want_kernel = false;
    std::vector<detail::LinCondition> conds(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
      // rhs stored as the solve target: sum_b M (u_xy - f) - E(L_fixed)
      Expression rhs;
      for (int b = 1; b <= m; ++b)
        rhs += M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b - 1)] *
               (Expression::coordinate(Coordinate::uxy(b)) - sys.rhs(b));
      rhs -= e_fixed[static_cast<std::size_t>(a)];
      prob.coeffs.push_back(std::move(rhs));
      conds[static_cast<std::size_t>(a)].rhs_id =
          static_cast<int>(prob.coeffs.size()) - 1;
    }
    for (int which = 0; which < nfuncs; ++which)
      for (int k = 0; k < nb; ++k) {
        int col = which * nb + k;
        Lagrangian lj = unit_lagrangian(which, basis[static_cast<std::size_t>(k)]);
        ExprVec ej = euler_lagrange(lj, m);
        for (int a = 0; a < m; ++a) {
          if (ej[static_cast<std::size_t>(a)].is_structural_zero()) continue;
          prob.coeffs.push_back(ej[static_cast<std::size_t>(a)]);
          conds[static_cast<std::size_t>(a)].terms.push_back(
              {col, static_cast<int>(prob.coeffs.size()) - 1, -1});
        }
      }
    prob.conds = std::move(conds);
    LinearSolution sol = detail::solve_by_sampling(prob, kDefaultSeed);
    if (!sol.consistent) {
      out.residual_constraints = prob.cols;
      return std::nullopt;
    }
    return sol.particular;
  };

  // Escalate the ansatz degree; most closed forms live at low degree and
  // the skew part of R is widened only when the symmetric ansatz fails.
  for (int cap = 0; cap <= degree_cap; ++cap) {
    std::vector<Expression> basis = point_function_basis(sys, cap);
    const int nb = static_cast<int>(basis.size());
    for (bool with_skew : {false, true}) {
      auto solved = attempt(basis, with_skew);
      if (!solved) continue;
      const QVector& c = *solved;
      auto fn = [&](int which) {
        Expression e;
        for (int k = 0; k < nb; ++k) {
          const Rational& v = c[static_cast<std::size_t>(which * nb + k)];
          if (v != 0)
            e += Expression::from_rational(v) *
                 basis[static_cast<std::size_t>(k)];
        }
        return e;
      };
      StructuredLagrangian s;
      s.R = fixed.R;
      if (with_skew) {
        int slot = 2 * m + 1;
        for (int a = 0; a < m; ++a)
          for (int b = a + 1; b < m; ++b) {
            Expression sk = fn(slot++);
            s.R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += sk;
            s.R[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] -= sk;
          }
      }
      for (int a = 0; a < m; ++a) {
        s.Q.push_back(fn(a));
        s.P.push_back(fn(m + a));
      }
      s.N = fn(2 * m);
      Lagrangian L = Lagrangian::from_structured(std::move(s));
      VerifyResult v = verify_multiplier(L, M, sys);
      if (!v.ok) continue;  // sampled solve produced a spurious candidate
      out.ok = true;
      out.lagrangian = std::move(L);
      out.message = with_skew ? "constructed with a skew R part"
                              : "constructed with symmetric R";
      return out;
    }
  }
  std::ostringstream msg;
  msg << "no solution at degree cap " << degree_cap
      << "; the ansatz may be too small";
  out.message = msg.str();
  return out;
}

ZeroResult divergence_equivalent(const Lagrangian& l1, const Lagrangian& l2,
                                 int m) {
  Expression d = l1.expand(m) - l2.expand(m);
  require_first_order(d, "divergence_equivalent");
  Lagrangian diff = Lagrangian::from_expression(d);
  ExprVec E = euler_lagrange(diff, m);
  ZeroResult out{true, Certainty::Exact};
  for (const auto& e : E) {
    ZeroResult z = is_zero(e);
    if (!z.zero) out.zero = false;
    if (z.certainty == Certainty::Probabilistic &&
        out.certainty == Certainty::Exact)
      out.certainty = Certainty::Probabilistic;
    if (z.certainty == Certainty::Indeterminate)
      out.certainty = Certainty::Indeterminate;
  }
  return out;
}

}  // namespace fgordon
