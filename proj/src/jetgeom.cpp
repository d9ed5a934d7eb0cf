#include "fgordon/jetgeom.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "expr_internal.hpp"

namespace fgordon {

using detail::Atom;
using detail::Polynomial;

ExprMat expr_matrix(int rows, int cols) {
  return ExprMat(static_cast<std::size_t>(rows),
                 ExprVec(static_cast<std::size_t>(cols)));
}

ExprTensor3 expr_tensor3(int a, int b, int c) {
  return ExprTensor3(static_cast<std::size_t>(a), expr_matrix(b, c));
}

bool ConnectionForm::is_zero_form() const {
  for (const auto& mat : du)
    for (const auto& row : mat)
      for (const auto& e : row)
        if (!e.is_structural_zero()) return false;
  for (const auto& row : dy)
    for (const auto& e : row)
      if (!e.is_structural_zero()) return false;
  for (const auto& row : dx)
    for (const auto& e : row)
      if (!e.is_structural_zero()) return false;
  return true;
}

FGordonSystem make_system(int m, ExprVec f, NameTable names) {
  if (m < 1) throw std::invalid_argument("system needs at least one equation");
  if (static_cast<int>(f.size()) != m)
    throw std::invalid_argument("expected exactly m right-hand sides");
  if (names.dependent.empty()) names = default_names(m);
  names.validate();
  if (names.m() != m)
    throw std::invalid_argument("name table does not match m");
  for (const auto& e : f) {
    if (e.contains_kind(CoordKind::Uxx) || e.contains_kind(CoordKind::Uxy) ||
        e.contains_kind(CoordKind::Uyy))
      throw std::invalid_argument(
          "right-hand sides must be first order (no second-order jets)");
    for (int key : e.coordinate_keys()) {
      Coordinate c = coord_from_key(key);
      if (c.index > m)
        throw std::invalid_argument("right-hand side references u index > m");
    }
  }
  FGordonSystem sys;
  sys.m = m;
  sys.f = std::move(f);
  sys.names = std::move(names);
  return sys;
}

// ---------------------------------------------------------------------------
// Normal form
// ---------------------------------------------------------------------------

std::optional<NormalForm> check_normal_form(FGordonSystem& sys) {
  if (sys.normal_form) return sys.normal_form;
  const int m = sys.m;
  // A first-order multiplier forces f to be free of the (x,x) and (y,y)
  // second gradient derivatives.
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      for (int g = b; g <= m; ++g) {
        Expression dxx =
            sys.rhs(a).partial(Coordinate::ux(b)).partial(Coordinate::ux(g));
        Expression dyy =
            sys.rhs(a).partial(Coordinate::uy(b)).partial(Coordinate::uy(g));
        if (!is_zero(dxx).zero || !is_zero(dyy).zero) return std::nullopt;
      }

  Substitution grad_to_zero;
  for (int a = 1; a <= m; ++a) {
    grad_to_zero.coords[coord_key(Coordinate::ux(a))] = Expression();
    grad_to_zero.coords[coord_key(Coordinate::uy(a))] = Expression();
  }

  NormalForm nf;
  nf.C = expr_tensor3(m, m, m);
  nf.A = expr_matrix(m, m);
  nf.B = expr_matrix(m, m);
  nf.E.resize(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    const Expression& fa = sys.rhs(a);
    for (int b = 1; b <= m; ++b) {
      for (int g = 1; g <= m; ++g)
        nf.C[a - 1][b - 1][g - 1] =
            -fa.partial(Coordinate::ux(b)).partial(Coordinate::uy(g));
      nf.A[a - 1][b - 1] =
          -fa.partial(Coordinate::ux(b)).substitute(grad_to_zero);
      nf.B[a - 1][b - 1] =
          -fa.partial(Coordinate::uy(b)).substitute(grad_to_zero);
    }
    nf.E[a - 1] = -fa.substitute(grad_to_zero);
  }

  // The coefficients must depend on (x,y,u) only and reassemble f exactly.
  for (int a = 1; a <= m; ++a) {
    Expression back = nf.E[a - 1];
    for (int b = 1; b <= m; ++b) {
      back += nf.A[a - 1][b - 1] * Expression::coordinate(Coordinate::ux(b));
      back += nf.B[a - 1][b - 1] * Expression::coordinate(Coordinate::uy(b));
      for (int g = 1; g <= m; ++g)
        back += nf.C[a - 1][b - 1][g - 1] *
                Expression::coordinate(Coordinate::ux(b)) *
                Expression::coordinate(Coordinate::uy(g));
    }
    if (!is_zero(sys.rhs(a) + back).zero) return std::nullopt;
  }
  sys.normal_form = std::move(nf);
  return sys.normal_form;
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

InvariantTriple invariants(const FGordonSystem& sys) {
  const int m = sys.m;
  InvariantTriple inv;
  inv.H = expr_matrix(m, m);
  inv.K = expr_matrix(m, m);
  inv.S = expr_tensor3(m, m, m);
  std::span<const Expression> rhs(sys.f);
  for (int g = 1; g <= m; ++g) {
    const Expression& fg = sys.rhs(g);
    for (int a = 1; a <= m; ++a) {
      Expression h = fg.partial(Coordinate::u(a));
      Expression k = h;
      for (int s = 1; s <= m; ++s) {
        h += fg.partial(Coordinate::uy(s)) * sys.rhs(s).partial(Coordinate::ux(a));
        k += fg.partial(Coordinate::ux(s)) * sys.rhs(s).partial(Coordinate::uy(a));
      }
      h -= total_derivative(fg.partial(Coordinate::ux(a)), Direction::X, rhs);
      k -= total_derivative(fg.partial(Coordinate::uy(a)), Direction::Y, rhs);
      inv.H[g - 1][a - 1] = h;
      inv.K[g - 1][a - 1] = k;
      for (int b = 1; b <= m; ++b)
        inv.S[g - 1][a - 1][b - 1] =
            fg.partial(Coordinate::ux(b)).partial(Coordinate::uy(a)) -
            fg.partial(Coordinate::ux(a)).partial(Coordinate::uy(b));
    }
  }
  if (sys.normal_form) {
    // For normal-form systems the u_xx / u_yy contributions cancel by
    // construction; a residue here is an internal inconsistency.
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < m; ++a)
        if (inv.H[g][a].contains_kind(CoordKind::Uxx) ||
            inv.H[g][a].contains_kind(CoordKind::Uyy) ||
            inv.K[g][a].contains_kind(CoordKind::Uxx) ||
            inv.K[g][a].contains_kind(CoordKind::Uyy))
          throw std::logic_error(
              "invariants: second-order residue on a normal-form system");
  }
  return inv;
}

ConnectionForm connection_form(FGordonSystem& sys) {
  auto nf = check_normal_form(sys);
  if (!nf)
    throw std::invalid_argument(
        "connection form requires the normal form; the system admits no "
        "first-order variational multiplier");
  const int m = sys.m;
  ConnectionForm w;
  w.m = m;
  w.du = expr_tensor3(m, m, m);
  w.dy = expr_matrix(m, m);
  w.dx = expr_matrix(m, m);
  for (int s = 0; s < m; ++s)
    for (int a = 0; a < m; ++a) {
      w.dy[s][a] = nf->A[s][a];
      w.dx[s][a] = nf->B[s][a];
      for (int t = 0; t < m; ++t) w.du[s][a][t] = nf->C[s][a][t];
    }
  return w;
}

// ---------------------------------------------------------------------------
// Gradient-monomial coefficient extraction
// ---------------------------------------------------------------------------

int GradMonomial::total_degree() const {
  int d = 0;
  for (int e : exps) d += e;
  return d;
}

std::string GradMonomial::print(const NameTable& names) const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    int dep = static_cast<int>(i) / 2 + 1;
    Coordinate c = (i % 2 == 0) ? Coordinate::ux(dep) : Coordinate::uy(dep);
    if (any) os << "*";
    os << names.coordinate_name(c);
    if (exps[i] > 1) os << "^" << exps[i];
    any = true;
  }
  return any ? os.str() : "1";
}

bool grad_monomial_less(const GradMonomial& a, const GradMonomial& b) {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.exps.size() && i < b.exps.size(); ++i)
    if (a.exps[i] != b.exps[i]) return a.exps[i] > b.exps[i];
  return false;
}

std::vector<std::pair<GradMonomial, Expression>> gradient_coefficients(
    const Expression& e, int m) {
  const ExprData& d = *e.data();
  auto gradient_slot = [m](const Atom& a) -> int {
    if (a.tag != Atom::Tag::Coord) return -1;
    if (a.coord.kind == CoordKind::Ux) return 2 * (a.coord.index - 1);
    if (a.coord.kind == CoordKind::Uy) return 2 * (a.coord.index - 1) + 1;
    return -1;
  };
  // Gradients must not occur in the denominator or inside opaque arguments.
  for (const Atom& a : detail::poly_atoms(d.den))
    if (gradient_slot(a) >= 0)
      throw std::invalid_argument(
          "gradient_coefficients: gradient in a denominator");
  for (const auto& [kind, arg] : e.function_atoms())
    for (int key : arg.coordinate_keys()) {
      Coordinate c = coord_from_key(key);
      if (c.is_gradient())
        throw std::invalid_argument(
            "gradient_coefficients: gradient inside an opaque function");
    }

  struct MonoLess {
    bool operator()(const GradMonomial& a, const GradMonomial& b) const {
      return grad_monomial_less(a, b);
    }
  };
  std::map<GradMonomial, Polynomial, MonoLess> buckets;
  for (const auto& t : d.num.terms) {
    GradMonomial gm;
    gm.exps.assign(static_cast<std::size_t>(2 * m), 0);
    detail::Monomial rest;
    for (const auto& [a, ex] : t.mono.factors) {
      int slot = gradient_slot(a);
      if (slot >= 0)
        gm.exps[static_cast<std::size_t>(slot)] = ex;
      else
        rest.factors.emplace_back(a, ex);
    }
    detail::Term term{std::move(rest), t.coef};
    Polynomial one;
    one.terms.push_back(std::move(term));
    auto it = buckets.find(gm);
    if (it == buckets.end())
      buckets.emplace(std::move(gm), std::move(one));
    else
      it->second = detail::poly_add(it->second, one);
  }
  std::vector<std::pair<GradMonomial, Expression>> out;
  Expression den(detail::make_fraction(d.den, Polynomial::constant(1)));
  for (auto& [gm, poly] : buckets) {
    Expression num(detail::make_fraction(std::move(poly), Polynomial::constant(1)));
    Expression coeff = num / den;
    if (!coeff.is_structural_zero()) out.emplace_back(gm, std::move(coeff));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curvature
// ---------------------------------------------------------------------------

ExprTensor4 curvature(const ExprTensor3& gamma) {
  const int m = static_cast<int>(gamma.size());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int g = b; g < m; ++g) {
        if (!is_zero(gamma[a][b][g] - gamma[a][g][b]).zero)
          throw std::invalid_argument("curvature: connection not symmetric");
        for (int key : gamma[a][b][g].coordinate_keys()) {
          Coordinate c = coord_from_key(key);
          if (c.kind != CoordKind::U)
            throw std::invalid_argument(
                "curvature: connection entries must depend on u only");
        }
      }
  ExprTensor4 r(static_cast<std::size_t>(m), expr_tensor3(m, m, m));
  for (int g = 0; g < m; ++g)
    for (int t = 0; t < m; ++t)
      for (int e = 0; e < m; ++e)
        for (int a = 0; a < m; ++a) {
          Expression v = gamma[g][a][t].partial(Coordinate::u(e + 1)) -
                         gamma[g][e][t].partial(Coordinate::u(a + 1));
          for (int s = 0; s < m; ++s)
            v += gamma[g][e][s] * gamma[s][a][t] -
                 gamma[g][a][s] * gamma[s][e][t];
          r[g][t][e][a] = v;
        }
  return r;
}

ExprMat curvature_contraction(const ExprTensor4& r) {
  const int m = static_cast<int>(r.size());
  ExprMat h = expr_matrix(m, m);
  for (int g = 0; g < m; ++g)
    for (int a = 0; a < m; ++a) {
      Expression v;
      for (int e = 0; e < m; ++e)
        for (int t = 0; t < m; ++t)
          v += r[g][t][e][a] * Expression::coordinate(Coordinate::ux(e + 1)) *
               Expression::coordinate(Coordinate::uy(t + 1));
      h[g][a] = v;
    }
  return h;
}

}  // namespace fgordon
