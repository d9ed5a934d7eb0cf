#include "fgordon/multspace.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "expr_internal.hpp"
#include "sampled_linear.hpp"

namespace fgordon {

int unknown_count(int m) { return m * (m + 1) / 2; }

int unknown_index(int a, int b, int m) {
  if (a > b) std::swap(a, b);
  // (1,1),(1,2),...,(1,m),(2,2),...
  return (a - 1) * m - (a - 1) * (a - 2) / 2 + (b - a);
}

std::pair<int, int> unknown_pair(int idx, int m) {
  for (int a = 1; a <= m; ++a) {
    int width = m - a + 1;
    if (idx < width) return {a, a + idx};
    idx -= width;
  }
  throw std::out_of_range("unknown_pair");
}

std::string unknown_name(int idx, int m) {
  auto [a, b] = unknown_pair(idx, m);
  return "M" + std::to_string(a) + std::to_string(b);
}

namespace {

// Sign/scale normalization: divide by the first nonzero coefficient when it
// is a rational constant; otherwise only flip the sign so the leading
// numerator coefficient of the first nonzero entry is positive.  Rows that
// are non-constant rational-function multiples of one another are kept;
// pointwise rank handles the dependence.
bool normalize_row(std::vector<Expression>& row) {
  for (auto& e : row) {
    if (e.is_structural_zero()) continue;
    if (auto c = e.as_rational()) {
      Expression inv = Expression::from_rational(Rational(1) / *c);
      for (auto& x : row) x = x * inv;
    } else if (e.data()->num.terms[0].coef < 0) {
      for (auto& x : row) x = -x;
    }
    return true;
  }
  return false;  // identically zero
}

struct RowLess {
  bool operator()(const std::vector<Expression>& a,
                  const std::vector<Expression>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      int c = Expression::compare(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

using RowSet = std::set<std::vector<Expression>, RowLess>;

void push_row(PhiSystem& phi, RowSet& seen, std::vector<Expression> row,
              int stage, std::string origin) {
  if (!normalize_row(row)) return;
  if (!seen.insert(row).second) return;
  phi.rows.push_back(PhiRow{std::move(row), stage, std::move(origin)});
}

RowSet existing_rows(const PhiSystem& phi) {
  RowSet s;
  for (const auto& r : phi.rows) s.insert(r.c);
  return s;
}

}  // namespace

PhiSystem build_phi0(const InvariantTriple& inv, int m,
                     const NameTable& names) {
  PhiSystem phi;
  phi.m = m;
  phi.stage = 0;
  const int n = unknown_count(m);
  RowSet seen;
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      std::vector<Expression> row(static_cast<std::size_t>(n));
      for (int s = 1; s <= m; ++s) {
        int ia = unknown_index(a, s, m);
        int ib = unknown_index(b, s, m);
        row[static_cast<std::size_t>(ia)] += inv.H[s - 1][b - 1];
        row[static_cast<std::size_t>(ib)] -= inv.K[s - 1][a - 1];
      }
      // Split into one constraint per gradient monomial.
      struct Less {
        bool operator()(const GradMonomial& x, const GradMonomial& y) const {
          return grad_monomial_less(x, y);
        }
      };
      std::map<GradMonomial, std::vector<Expression>, Less> split;
      for (int u = 0; u < n; ++u) {
        if (row[static_cast<std::size_t>(u)].is_structural_zero()) continue;
        for (auto& [gm, coeff] :
             gradient_coefficients(row[static_cast<std::size_t>(u)], m)) {
          auto it = split.find(gm);
          if (it == split.end()) {
            std::vector<Expression> fresh(static_cast<std::size_t>(n));
            it = split.emplace(gm, std::move(fresh)).first;
          }
          it->second[static_cast<std::size_t>(u)] = std::move(coeff);
        }
      }
      for (auto& [gm, r] : split) {
        std::ostringstream origin;
        origin << "HK(" << a << "," << b << ") @ " << gm.print(names);
        push_row(phi, seen, std::move(r), 0, origin.str());
      }
    }
  for (int a = 1; a <= m; ++a)
    for (int b = a; b <= m; ++b)
      for (int g = 1; g <= m; ++g) {
        std::vector<Expression> row(static_cast<std::size_t>(n));
        for (int s = 1; s <= m; ++s) {
          row[static_cast<std::size_t>(unknown_index(a, s, m))] +=
              inv.S[s - 1][b - 1][g - 1];
          row[static_cast<std::size_t>(unknown_index(b, s, m))] +=
              inv.S[s - 1][a - 1][g - 1];
        }
        std::ostringstream origin;
        origin << "S(" << a << "," << b << "," << g << ")";
        push_row(phi, seen, std::move(row), 0, origin.str());
      }
  return phi;
}

PhiSystem augment(const PhiSystem& phi, const ConnectionForm& omega,
                  const NameTable& names) {
  const int m = phi.m;
  const int n = unknown_count(m);
  PhiSystem out = phi;
  out.stage = phi.stage + 1;
  RowSet seen = existing_rows(phi);

  // Omega^b_s evaluated on the direction: x -> B, y -> A, u^t -> C^b_{st}.
  auto omega_entry = [&](int b, int s, int dir) -> const Expression& {
    if (dir == 0) return omega.dx[b - 1][s - 1];
    if (dir == 1) return omega.dy[b - 1][s - 1];
    return omega.du[b - 1][s - 1][dir - 2];
  };

  for (std::size_t ri = 0; ri < phi.rows.size(); ++ri) {
    const PhiRow& row = phi.rows[ri];
    if (row.stage != phi.stage) continue;  // older rows already differentiated
    // Unfold to the full symmetric coefficient matrix.
    ExprMat full = expr_matrix(m, m);
    Expression half = Expression::from_rational(Rational(1, 2));
    for (int u = 0; u < n; ++u) {
      auto [a, b] = unknown_pair(u, m);
      if (a == b) {
        full[a - 1][a - 1] = row.c[static_cast<std::size_t>(u)];
      } else {
        Expression h = row.c[static_cast<std::size_t>(u)] * half;
        full[a - 1][b - 1] = h;
        full[b - 1][a - 1] = h;
      }
    }
    for (int dir = 0; dir < 2 + m; ++dir) {
      Coordinate dc = dir == 0   ? Coordinate::x()
                      : dir == 1 ? Coordinate::y()
                                 : Coordinate::u(dir - 1);
      std::vector<Expression> derived(static_cast<std::size_t>(n));
      for (int a = 1; a <= m; ++a)
        for (int b = a; b <= m; ++b) {
          Expression v = full[a - 1][b - 1].partial(dc);
          for (int s = 1; s <= m; ++s) {
            v += full[a - 1][s - 1] * omega_entry(b, s, dir);
            v += full[s - 1][b - 1] * omega_entry(a, s, dir);
          }
          int u = unknown_index(a, b, m);
          derived[static_cast<std::size_t>(u)] = (a == b) ? v : 2 * v;
        }
      std::ostringstream origin;
      origin << "d/d" << names.coordinate_name(dc) << " of row " << ri << " ["
             << row.origin << "]";
      push_row(out, seen, std::move(derived), out.stage, origin.str());
    }
  }
  return out;
}

namespace {

// Sampling slots for a row system: coordinates occurring plus always
// (x, y, u^1..u^m); opaque atoms valued independently.
struct SampleSlots {
  std::set<int> coord_keys;
  std::set<int> params;
  std::vector<std::pair<FuncKind, Expression>> funcs;

  void add(const Expression& e) {
    for (int k : e.coordinate_keys()) coord_keys.insert(k);
    for (int p : e.parameter_indices()) params.insert(p);
    for (auto& [kind, arg] : e.function_atoms()) {
      bool dup = false;
      for (auto& [k2, a2] : funcs)
        if (k2 == kind && Expression::compare(a2, arg) == 0) dup = true;
      if (!dup) funcs.emplace_back(kind, arg);
    }
  }

  Point draw(RationalSampler& sampler) const {
    Point p;
    for (int k : coord_keys) p.coords[k] = sampler.next();
    for (int i : params) p.params[i] = sampler.next();
    for (const auto& [kind, arg] : funcs)
      p.functions.emplace_back(kind, arg, sampler.next());
    return p;
  }
};

}  // namespace

RankResult generic_rank(const PhiSystem& phi, std::uint64_t seed) {
  const int n = unknown_count(phi.m);
  SampleSlots slots;
  slots.coord_keys.insert(coord_key(Coordinate::x()));
  slots.coord_keys.insert(coord_key(Coordinate::y()));
  for (int a = 1; a <= phi.m; ++a)
    slots.coord_keys.insert(coord_key(Coordinate::u(a)));
  for (const auto& r : phi.rows)
    for (const auto& e : r.c) slots.add(e);

  RationalSampler sampler(seed);
  RankResult res;
  int evaluated = 0;
  int attempts = 0;
  while (evaluated < kSamplePoints && attempts < kSamplePoints + 16) {
    ++attempts;
    Point p = slots.draw(sampler);
    QMatrix mat;
    mat.reserve(phi.rows.size());
    try {
      for (const auto& r : phi.rows) {
        QVector row(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u)
          row[static_cast<std::size_t>(u)] =
              r.c[static_cast<std::size_t>(u)].evaluate(p).value;
        mat.push_back(std::move(row));
      }
    } catch (const PoleError&) {
      continue;
    } catch (const EvalError&) {
      continue;
    }
    int rk = rank_bareiss(mat);
    res.points.push_back(PointRecord{std::move(p), rk});
    ++evaluated;
  }
  if (evaluated == 0)
    throw EvalError("generic_rank: no usable sample point (persistent poles)");
  res.rank = res.points[0].rank;
  res.base_index = 0;
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    if (res.points[i].rank > res.rank) {
      res.rank = res.points[i].rank;
      res.base_index = static_cast<int>(i);
    }
  }
  for (const auto& pr : res.points)
    if (pr.rank != res.rank) res.stratified = true;
  return res;
}

// ---------------------------------------------------------------------------
// Degeneracy probe
// ---------------------------------------------------------------------------

namespace {

Expression determinant(const ExprMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return Expression::from_int(1);
  if (n == 1) return m[0][0];
  Expression det;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_structural_zero()) continue;
    ExprMat minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      ExprVec row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Expression cof = m[0][j] * determinant(minor);
    det = (j % 2 == 0) ? det + cof : det - cof;
  }
  return det;
}

}  // namespace

DegeneracyResult degeneracy_probe(const std::vector<ExprMat>& basis, int m,
                                  std::uint64_t seed) {
  DegeneracyResult out;
  const int s = static_cast<int>(basis.size());
  if (s == 0) {
    out.verdict = DegeneracyVerdict::AllDegenerate;
    return out;
  }
  ExprMat comb = expr_matrix(m, m);
  for (int i = 0; i < s; ++i) {
    Expression ci = Expression::parameter(i + 1);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        comb[a][b] += ci * basis[static_cast<std::size_t>(i)][a][b];
  }
  out.det = determinant(comb);
  ZeroResult z = is_zero(out.det, seed);
  out.certainty = z.certainty;
  if (z.zero) {
    out.verdict = DegeneracyVerdict::AllDegenerate;
    return out;
  }
  SampleSlots slots;
  slots.add(out.det);
  RationalSampler sampler(seed);
  const int tries = m * s + 8;
  for (int t = 0; t < tries; ++t) {
    Point p = slots.draw(sampler);
    // Prefer small integer combinations for a readable witness.
    QVector cand(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
      long v = t == 0 ? (i == 0 ? 1 : 0) : sampler.next_int(-4, 4);
      cand[static_cast<std::size_t>(i)] = Rational(v);
      p.params[i + 1] = Rational(v);
    }
    try {
      if (out.det.evaluate(p).value != 0) {
        out.verdict = DegeneracyVerdict::NondegenerateFound;
        out.witness = std::move(cand);
        return out;
      }
    } catch (const PoleError&) {
    } catch (const EvalError&) {
    }
  }
  out.verdict = DegeneracyVerdict::Undetermined;
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

namespace {

std::vector<Expression> ansatz_basis(const PhiSystem& phi,
                                     const ConnectionForm& omega,
                                     int degree_cap, int m) {
  // Monomials in (x, y, u^1..u^m) of total degree <= cap, optionally times
  // one opaque atom drawn from the system's coefficients.
  std::vector<Expression> vars;
  vars.push_back(Expression::coordinate(Coordinate::x()));
  vars.push_back(Expression::coordinate(Coordinate::y()));
  for (int a = 1; a <= m; ++a)
    vars.push_back(Expression::coordinate(Coordinate::u(a)));
  std::vector<Expression> monos{Expression::from_int(1)};
  std::vector<Expression> frontier{Expression::from_int(1)};
  for (int d = 1; d <= degree_cap; ++d) {
    std::vector<Expression> next;
    std::set<std::string> dedup;  // canonical printing as key
    NameTable names = default_names(m);
    for (const auto& f : frontier)
      for (const auto& v : vars) {
        Expression e = f * v;
        std::string key = to_string(e, names);
        if (dedup.insert(key).second) next.push_back(e);
      }
    for (const auto& e : next) monos.push_back(e);
    frontier = std::move(next);
  }
  std::vector<std::pair<FuncKind, Expression>> atoms;
  auto collect = [&atoms](const Expression& e) {
    for (auto& [kind, arg] : e.function_atoms()) {
      bool dup = false;
      for (auto& [k2, a2] : atoms)
        if (k2 == kind && Expression::compare(a2, arg) == 0) dup = true;
      if (!dup) atoms.emplace_back(kind, arg);
    }
  };
  for (const auto& r : phi.rows)
    for (const auto& e : r.c) collect(e);
  for (const auto& mat : omega.du)
    for (const auto& row : mat)
      for (const auto& e : row) collect(e);
  for (const auto& row : omega.dx)
    for (const auto& e : row) collect(e);
  for (const auto& row : omega.dy)
    for (const auto& e : row) collect(e);

  std::vector<Expression> out = monos;
  for (const auto& [kind, arg] : atoms) {
    Expression atom = Expression::apply(kind, arg);
    for (const auto& mono : monos) out.push_back(atom * mono);
  }
  return out;
}

}  // namespace

std::vector<ExprMat> reconstruct_solutions(const MultiplierReport& report,
                                           const PhiSystem& phi,
                                           const ConnectionForm& omega,
                                           int degree_cap) {
  const int m = phi.m;
  const int n = unknown_count(m);
  if (report.dimension == 0) return {};

  auto verify = [&](const ExprMat& M) -> bool {
    for (const auto& r : phi.rows) {
      Expression v;
      for (int u = 0; u < n; ++u) {
        auto [a, b] = unknown_pair(u, m);
        v += r.c[static_cast<std::size_t>(u)] * M[a - 1][b - 1];
      }
      if (!is_zero(v).zero) return false;
    }
    for (int a = 1; a <= m; ++a)
      for (int b = a; b <= m; ++b)
        for (int dir = 0; dir < 2 + m; ++dir) {
          Coordinate dc = dir == 0   ? Coordinate::x()
                          : dir == 1 ? Coordinate::y()
                                     : Coordinate::u(dir - 1);
          Expression v = M[a - 1][b - 1].partial(dc);
          for (int s = 1; s <= m; ++s) {
            const Expression& oa = dir == 0   ? omega.dx[s - 1][b - 1]
                                   : dir == 1 ? omega.dy[s - 1][b - 1]
                                              : omega.du[s - 1][b - 1][dir - 2];
            const Expression& ob = dir == 0   ? omega.dx[s - 1][a - 1]
                                   : dir == 1 ? omega.dy[s - 1][a - 1]
                                              : omega.du[s - 1][a - 1][dir - 2];
            v -= M[a - 1][s - 1] * oa + M[b - 1][s - 1] * ob;
          }
          if (!is_zero(v).zero) return false;
        }
    return true;
  };

  if (omega.is_zero_form()) {
    std::vector<ExprMat> out;
    for (const auto& cm : report.pointwise_basis) {
      ExprMat M = expr_matrix(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          M[a][b] = Expression::from_rational(cm[static_cast<std::size_t>(a)]
                                                 [static_cast<std::size_t>(b)]);
      if (verify(M)) out.push_back(std::move(M));
    }
    if (static_cast<int>(out.size()) == report.dimension) return out;
    // fall through to the ansatz when the constants fail symbolically
  }

  auto reconstruct_at_degree = [&](int cap) -> std::vector<ExprMat> {
  std::vector<Expression> basis = ansatz_basis(phi, omega, cap, m);
  const int nb = static_cast<int>(basis.size());

  // Unknown c_{u,k}: column u*nb + k; M_u = sum_k c_{u,k} basis_k.
  detail::LinProblem prob;
  prob.cols = n * nb;
  prob.basis = basis;
  // Derivatives of the basis functions, indexed after the basis itself.
  std::vector<std::vector<int>> dbasis(
      static_cast<std::size_t>(nb), std::vector<int>(static_cast<std::size_t>(2 + m), -1));
  for (int k = 0; k < nb; ++k)
    for (int dir = 0; dir < 2 + m; ++dir) {
      Coordinate dc = dir == 0   ? Coordinate::x()
                      : dir == 1 ? Coordinate::y()
                                 : Coordinate::u(dir - 1);
      Expression d = basis[static_cast<std::size_t>(k)].partial(dc);
      if (d.is_structural_zero()) continue;
      dbasis[static_cast<std::size_t>(k)][static_cast<std::size_t>(dir)] =
          static_cast<int>(prob.basis.size());
      prob.basis.push_back(std::move(d));
    }
  auto coeff_id = [&prob](const Expression& e) {
    prob.coeffs.push_back(e);
    return static_cast<int>(prob.coeffs.size()) - 1;
  };

  for (const auto& r : phi.rows) {
    detail::LinCondition cond;
    for (int u = 0; u < n; ++u) {
      const Expression& c = r.c[static_cast<std::size_t>(u)];
      if (c.is_structural_zero()) continue;
      int cid = coeff_id(c);
      for (int k = 0; k < nb; ++k)
        cond.terms.push_back({u * nb + k, cid, k});
    }
    if (!cond.terms.empty()) prob.conds.push_back(std::move(cond));
  }
  for (int a = 1; a <= m; ++a)
    for (int b = a; b <= m; ++b)
      for (int dir = 0; dir < 2 + m; ++dir) {
        detail::LinCondition cond;
        int u0 = unknown_index(a, b, m);
        for (int k = 0; k < nb; ++k) {
          int did = dbasis[static_cast<std::size_t>(k)]
                          [static_cast<std::size_t>(dir)];
          if (did >= 0) cond.terms.push_back({u0 * nb + k, -1, did});
        }
        for (int s = 1; s <= m; ++s) {
          const Expression& oa = dir == 0   ? omega.dx[s - 1][b - 1]
                                 : dir == 1 ? omega.dy[s - 1][b - 1]
                                            : omega.du[s - 1][b - 1][dir - 2];
          const Expression& ob = dir == 0   ? omega.dx[s - 1][a - 1]
                                 : dir == 1 ? omega.dy[s - 1][a - 1]
                                            : omega.du[s - 1][a - 1][dir - 2];
          if (!oa.is_structural_zero()) {
            int cid = coeff_id(-oa);
            int us = unknown_index(a, s, m);
            for (int k = 0; k < nb; ++k)
              cond.terms.push_back({us * nb + k, cid, k});
          }
          if (!ob.is_structural_zero()) {
            int cid = coeff_id(-ob);
            int us = unknown_index(b, s, m);
            for (int k = 0; k < nb; ++k)
              cond.terms.push_back({us * nb + k, cid, k});
          }
        }
        if (!cond.terms.empty()) prob.conds.push_back(std::move(cond));
      }

  LinearSolution sol =
      detail::solve_by_sampling(prob, report.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<ExprMat> out;
  if (!sol.consistent) return out;
  for (const auto& vec : sol.kernel) {
    ExprMat Msol = expr_matrix(m, m);
    for (int u = 0; u < n; ++u) {
      auto [a, b] = unknown_pair(u, m);
      Expression e;
      for (int k = 0; k < nb; ++k) {
        const Rational& c = vec[static_cast<std::size_t>(u * nb + k)];
        if (c != 0)
          e += Expression::from_rational(c) * basis[static_cast<std::size_t>(k)];
      }
      Msol[a - 1][b - 1] = e;
      Msol[b - 1][a - 1] = e;
    }
    if (verify(Msol)) out.push_back(std::move(Msol));
  }
  return out;
  };

  // Escalate the ansatz degree; low-degree solutions are found cheaply and
  // reported in their simplest form.
  std::vector<ExprMat> best;
  for (int cap = 0; cap <= degree_cap; ++cap) {
    std::vector<ExprMat> found = reconstruct_at_degree(cap);
    if (static_cast<int>(found.size()) == report.dimension) return found;
    if (found.size() > best.size()) best = std::move(found);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

MultiplierReport stabilize(FGordonSystem& sys, std::uint64_t seed,
                           int degree_cap) {
  if (!check_normal_form(sys))
    throw std::invalid_argument(
        "stabilize: the system violates the normal-form conditions; no "
        "first-order variational multiplier exists");
  const int m = sys.m;
  const int n = unknown_count(m);

  InvariantTriple inv = invariants(sys);
  ConnectionForm omega = connection_form(sys);
  PhiSystem phi = build_phi0(inv, m, sys.names);

  MultiplierReport rep;
  rep.m = m;
  rep.seed = seed;
  rep.degree_cap = degree_cap;

  RankResult rr = generic_rank(phi, seed);
  int prev_rank = rr.rank;
  const int cap = n + 1;
  int stage = 0;
  bool stabilized = false;
  for (int i = 1; i <= cap; ++i) {
    PhiSystem next = augment(phi, omega, sys.names);
    RankResult nr = generic_rank(next, seed);
    if (nr.rank < prev_rank)
      throw std::logic_error("stabilize: rank decreased under augmentation");
    phi = std::move(next);
    rr = std::move(nr);
    stage = i;
    if (rr.rank == prev_rank) {
      stabilized = true;
      break;
    }
    prev_rank = rr.rank;
  }
  if (!stabilized)
    throw std::logic_error(
        "stabilize: rank kept growing past the theoretical stage bound; "
        "expression kernel inconsistency");

  rep.stabilized_stage = stage;
  rep.rank = rr.rank;
  rep.dimension = n - rr.rank;
  rep.sample_points = rr.points;
  if (rr.stratified) {
    std::ostringstream w;
    w << "rank varies across sample points (";
    for (std::size_t i = 0; i < rr.points.size(); ++i) {
      if (i) w << ", ";
      w << rr.points[i].rank;
    }
    w << "); the constant-rank hypothesis fails and the reported dimension "
         "is the generic one";
    rep.warnings.push_back(w.str());
  }
  rep.base_point = rr.points[static_cast<std::size_t>(rr.base_index)].point;

  // Constant nullspace basis at the base point.
  QMatrix at_base;
  for (const auto& r : phi.rows) {
    QVector row(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
      row[static_cast<std::size_t>(u)] =
          r.c[static_cast<std::size_t>(u)].evaluate(rep.base_point).value;
    at_base.push_back(std::move(row));
  }
  for (const auto& vec : nullspace(at_base, n)) {
    QMatrix Mc(static_cast<std::size_t>(m),
               QVector(static_cast<std::size_t>(m)));
    for (int u = 0; u < n; ++u) {
      auto [a, b] = unknown_pair(u, m);
      Mc[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] =
          vec[static_cast<std::size_t>(u)];
      Mc[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] =
          vec[static_cast<std::size_t>(u)];
    }
    rep.pointwise_basis.push_back(std::move(Mc));
  }

  rep.basis = reconstruct_solutions(rep, phi, omega, degree_cap);
  rep.closed_form = static_cast<int>(rep.basis.size()) == rep.dimension &&
                    rep.dimension > 0;
  if (rep.dimension > 0 && !rep.closed_form) {
    if (rep.basis.empty())
      rep.warnings.push_back(
          "dimension known, closed form not found at the ansatz degree cap");
    else
      rep.warnings.push_back(
          "closed forms found for only part of the solution space");
  }

  if (rep.dimension > 0) {
    if (rep.closed_form) {
      rep.degeneracy = degeneracy_probe(rep.basis, m, seed);
    } else {
      std::vector<ExprMat> constant_basis;
      for (const auto& cm : rep.pointwise_basis) {
        ExprMat M = expr_matrix(m, m);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            M[a][b] = Expression::from_rational(
                cm[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
        constant_basis.push_back(std::move(M));
      }
      rep.degeneracy = degeneracy_probe(constant_basis, m, seed);
      if (!constant_basis.empty())
        rep.warnings.push_back(
            "degeneracy judged on the pointwise constant basis");
    }
  } else {
    rep.degeneracy.verdict = DegeneracyVerdict::AllDegenerate;
  }
  rep.phi = std::move(phi);
  return rep;
}

}  // namespace fgordon
