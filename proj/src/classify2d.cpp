#include "fgordon/classify2d.hpp"

#include <sstream>
#include <stdexcept>

namespace fgordon {

const char* class_label_name(ClassLabel l) {
  switch (l) {
    case ClassLabel::ThreeLagrangians:
      return "THREE_LAGRANGIANS";
    case ClassLabel::TwoLagrangians:
      return "TWO_LAGRANGIANS";
    case ClassLabel::AtMostOne:
      return "AT_MOST_ONE";
    case ClassLabel::STraceObstructed:
      return "S_TRACE_OBSTRUCTED";
    case ClassLabel::NotNormalForm:
      return "NOT_NORMAL_FORM";
  }
  return "?";
}

const char* two_subtype_name(TwoSubtype s) {
  switch (s) {
    case TwoSubtype::Harmonic:
      return "harmonic";
    case TwoSubtype::Wave:
      return "wave";
    case TwoSubtype::DegenerateWvv:
      return "degenerate-W_vv";
    case TwoSubtype::Unspecified:
      return "unspecified";
  }
  return "?";
}

ExprMat build_A(const InvariantTriple& inv, int m) {
  if (m != 2) throw std::invalid_argument("build_A: m must be 2");
  const ExprMat& H = inv.H;
  const ExprMat& K = inv.K;
  ExprMat A = expr_matrix(4, 3);
  A[0][0] = H[0][0] - K[0][0];
  A[0][1] = H[1][0] - K[1][0];
  A[1][1] = H[0][1] - K[0][1];
  A[1][2] = H[1][1] - K[1][1];
  A[2][0] = H[0][1];
  A[2][1] = H[1][1] - K[0][0];
  A[2][2] = -K[1][0];
  A[3][0] = K[0][1];
  A[3][1] = K[1][1] - H[0][0];
  A[3][2] = -H[1][0];
  return A;
}

bool trace_obstruction_clear(const InvariantTriple& inv, int m) {
  if (m != 2) throw std::invalid_argument("trace_obstruction: m must be 2");
  for (int g = 0; g < m; ++g) {
    Expression tr;
    for (int a = 0; a < m; ++a) tr += inv.S[a][a][g];
    if (!is_zero(tr).zero) return false;
  }
  return true;
}

namespace {

// Generic rank of an arbitrary expression matrix by exact sampling over all
// occurring coordinates and opaque atoms.
int sample_rank(const ExprMat& rows, std::uint64_t seed) {
  std::set<int> coords;
  std::vector<std::pair<FuncKind, Expression>> funcs;
  for (const auto& r : rows)
    for (const auto& e : r) {
      for (int k : e.coordinate_keys()) coords.insert(k);
      for (auto& [kind, arg] : e.function_atoms()) {
        bool dup = false;
        for (auto& [k2, a2] : funcs)
          if (k2 == kind && Expression::compare(a2, arg) == 0) dup = true;
        if (!dup) funcs.emplace_back(kind, arg);
      }
    }
  RationalSampler sampler(seed);
  int best = 0;
  int evaluated = 0;
  for (int attempt = 0; attempt < kSamplePoints + 16 && evaluated < kSamplePoints;
       ++attempt) {
    Point p;
    for (int k : coords) p.coords[k] = sampler.next();
    for (const auto& [kind, arg] : funcs)
      p.functions.emplace_back(kind, arg, sampler.next());
    QMatrix mat;
    try {
      for (const auto& r : rows) {
        QVector row;
        for (const auto& e : r) row.push_back(e.evaluate(p).value);
        mat.push_back(std::move(row));
      }
    } catch (const PoleError&) {
      continue;
    } catch (const EvalError&) {
      continue;
    }
    ++evaluated;
    best = std::max(best, rank_bareiss(mat));
  }
  return best;
}

bool matrix_is_zero(const ExprMat& m) {
  for (const auto& r : m)
    for (const auto& e : r)
      if (!is_zero(e).zero) return false;
  return true;
}

struct SubtypeDecision {
  TwoSubtype subtype = TwoSubtype::Unspecified;
  std::optional<QVector> witness;
  std::string note;
};

// Classification of the determinant quadratic form on a 2-dimensional space
// of constant symmetric matrices: its signature is a congruence invariant
// that separates the three proof normal forms.
SubtypeDecision subtype_from_basis(const QMatrix& m1, const QMatrix& m2) {
  auto det2 = [](const QMatrix& a) -> Rational {
    return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  };
  // q(c1,c2) = det(c1 M1 + c2 M2) = A c1^2 + B c1 c2 + C c2^2
  Rational A = det2(m1);
  Rational C = det2(m2);
  Rational B = m1[0][0] * m2[1][1] + m2[0][0] * m1[1][1] -
               2 * m1[0][1] * m2[0][1];
  Rational disc = B * B - 4 * A * C;
  SubtypeDecision out;
  if (disc > 0)
    out.subtype = TwoSubtype::Wave;
  else if (disc < 0)
    out.subtype = A < 0 ? TwoSubtype::Harmonic : TwoSubtype::Unspecified;
  else
    out.subtype = (A == 0 && B == 0 && C == 0) ? TwoSubtype::Unspecified
                                               : TwoSubtype::DegenerateWvv;
  if (out.subtype == TwoSubtype::Unspecified) {
    out.note = "determinant form outside the three admissible signatures";
    return out;
  }
  // Indefinite witness: exact point with det < 0.
  auto q = [&](const Rational& c1, const Rational& c2) -> Rational {
    return A * c1 * c1 + B * c1 * c2 + C * c2 * c2;
  };
  std::vector<std::pair<Rational, Rational>> cands = {{1, 0}, {0, 1}, {1, 1},
                                                      {1, -1}};
  if (A != 0) cands.emplace_back(Rational(-B) / (2 * A), 1);
  if (A == 0 && B != 0) cands.emplace_back(-(C + 1) / B, 1);
  for (auto& [c1, c2] : cands) {
    if (q(c1, c2) < 0) {
      out.witness = QVector{c1, c2};
      break;
    }
  }
  return out;
}

}  // namespace

ClassificationVerdict classify(FGordonSystem& sys, std::uint64_t seed) {
  if (sys.m != 2) throw std::invalid_argument("classify: m must be 2");
  ClassificationVerdict v;
  if (!check_normal_form(sys)) {
    v.label = ClassLabel::NotNormalForm;
    v.multspace_dimension = 0;
    v.notes.push_back(
        "the second-derivative conditions fail; no first-order variational "
        "multiplier exists");
    return v;
  }
  InvariantTriple inv = invariants(sys);
  MultiplierReport rep = stabilize(sys, seed);
  v.multspace_dimension = rep.dimension;

  v.h_minus_k = expr_matrix(2, 2);
  bool heqk = true;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      v.h_minus_k[a][b] = inv.H[a][b] - inv.K[a][b];
      if (!is_zero(v.h_minus_k[a][b]).zero) heqk = false;
    }

  if (!trace_obstruction_clear(inv, 2)) {
    v.label = ClassLabel::STraceObstructed;
    v.notes.push_back(
        "the S-trace condition fails, so no nondegenerate multiplier exists; "
        "the stabilized solution space may still contain degenerate "
        "solutions");
    return v;
  }

  ExprMat A = build_A(inv, 2);
  v.rank_A = sample_rank(A, seed);

  if (!heqk) {
    v.label = ClassLabel::AtMostOne;
    v.notes.push_back("H != K, so multiple Lagrangians are impossible");
    return v;
  }

  // H = K and S = 0 from here on.
  Expression lambda = inv.H[0][0];
  bool lambda_like = is_zero(inv.H[1][1] - lambda).zero &&
                     is_zero(inv.H[0][1]).zero && is_zero(inv.H[1][0]).zero;
  if (lambda_like) {
    if (v.rank_A != 0)
      throw std::logic_error("classify: H = K = lambda I but rank(A) != 0");
    for (int a = 1; a <= 2; ++a)
      if (!is_zero(lambda.partial(Coordinate::u(a))).zero)
        throw std::logic_error(
            "classify: the scalar of H = K = lambda I depends on u");
    v.label = ClassLabel::ThreeLagrangians;
    v.lambda = lambda;
    return v;
  }

  bool gradient_free = true;
  for (const auto& f : sys.f)
    for (int key : f.coordinate_keys())
      if (coord_from_key(key).is_gradient()) gradient_free = false;
  if (!gradient_free) {
    v.reducible_not_constructed = true;
    v.notes.push_back(
        "H = K and S = 0 but the right-hand sides carry gradient terms: the "
        "system is reducible to u_xy = g(x,y,u) (reduction not constructed)");
    v.label = rep.dimension >= 2 ? ClassLabel::TwoLagrangians
                                 : ClassLabel::AtMostOne;
    return v;
  }

  if (rep.dimension < 2) {
    v.label = ClassLabel::AtMostOne;
    return v;
  }
  v.label = ClassLabel::TwoLagrangians;
  if (rep.dimension == 2 && rep.pointwise_basis.size() == 2) {
    SubtypeDecision sd =
        subtype_from_basis(rep.pointwise_basis[0], rep.pointwise_basis[1]);
    v.subtype = sd.subtype;
    v.indefinite_witness = sd.witness;
    if (!sd.note.empty()) v.notes.push_back(sd.note);
    // When the system is already a gradient of a potential, the subtype can
    // be cross-checked on the second derivatives directly.
    const Expression& F = sys.rhs(1);
    const Expression& G = sys.rhs(2);
    if (is_zero(F.partial(Coordinate::u(1)) - G.partial(Coordinate::u(2)))
            .zero) {
      Expression wvv = F.partial(Coordinate::u(2));
      Expression wuu = G.partial(Coordinate::u(1));
      TwoSubtype direct = TwoSubtype::Unspecified;
      if (is_zero(wuu + wvv).zero)
        direct = TwoSubtype::Harmonic;
      else if (is_zero(wuu - wvv).zero)
        direct = TwoSubtype::Wave;
      else if (is_zero(wvv).zero || is_zero(wuu).zero)
        direct = TwoSubtype::DegenerateWvv;
      if (direct != TwoSubtype::Unspecified && direct != v.subtype)
        throw std::logic_error(
            "classify: potential-form subtype disagrees with the "
            "determinant-form signature");
      if (direct != TwoSubtype::Unspecified)
        v.notes.push_back(std::string("explicit potential witness: W_vv, "
                                      "W_uu conditions match subtype ") +
                          two_subtype_name(direct));
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Covariance under affine fiber-preserving maps
// ---------------------------------------------------------------------------

namespace {

std::optional<QMatrix> rational_inverse(const QMatrix& t) {
  const std::size_t n = t.size();
  QMatrix aug(n, QVector(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = t[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<int> piv = rref(aug);
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<std::size_t>(i) >= piv.size() ||
        piv[i] != static_cast<int>(i))
      return std::nullopt;
  QMatrix inv(n, QVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace

bool covariance_check(const FGordonSystem& sys, const AffineFiberMap& map) {
  const int m = sys.m;
  if (map.a1 == 0 || map.b1 == 0)
    throw std::invalid_argument("covariance_check: degenerate base map");
  if (static_cast<int>(map.T.size()) != m)
    throw std::invalid_argument("covariance_check: T has the wrong size");
  auto tinv = rational_inverse(map.T);
  if (!tinv) throw std::invalid_argument("covariance_check: T not invertible");

  // Substitution expressing the original coordinates through the new ones:
  // x = (xb - a0)/a1, u^g = (T^-1 ub)^g, u^g_x = a1 (T^-1 ub_x)^g, ...
  Substitution s;
  s.coords[coord_key(Coordinate::x())] =
      (Expression::coordinate(Coordinate::x()) -
       Expression::from_rational(map.a0)) /
      Expression::from_rational(map.a1);
  s.coords[coord_key(Coordinate::y())] =
      (Expression::coordinate(Coordinate::y()) -
       Expression::from_rational(map.b0)) /
      Expression::from_rational(map.b1);
  for (int g = 1; g <= m; ++g) {
    Expression u, ux, uy;
    for (int s2 = 1; s2 <= m; ++s2) {
      Expression c = Expression::from_rational(
          (*tinv)[static_cast<std::size_t>(g - 1)]
                 [static_cast<std::size_t>(s2 - 1)]);
      u += c * Expression::coordinate(Coordinate::u(s2));
      ux += c * Expression::coordinate(Coordinate::ux(s2));
      uy += c * Expression::coordinate(Coordinate::uy(s2));
    }
    s.coords[coord_key(Coordinate::u(g))] = u;
    s.coords[coord_key(Coordinate::ux(g))] =
        Expression::from_rational(map.a1) * ux;
    s.coords[coord_key(Coordinate::uy(g))] =
        Expression::from_rational(map.b1) * uy;
  }

  Rational jac = map.a1 * map.b1;
  ExprVec fbar(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    Expression acc;
    for (int g = 1; g <= m; ++g)
      acc += Expression::from_rational(map.T[static_cast<std::size_t>(a - 1)]
                                             [static_cast<std::size_t>(g - 1)]) *
             sys.rhs(g).substitute(s);
    fbar[static_cast<std::size_t>(a - 1)] =
        acc / Expression::from_rational(jac);
  }
  FGordonSystem tsys = make_system(m, fbar, sys.names);

  InvariantTriple got = invariants(tsys);
  InvariantTriple orig = invariants(sys);

  auto conj = [&](const ExprMat& h) {
    ExprMat out = expr_matrix(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        Expression acc;
        for (int s1 = 0; s1 < m; ++s1)
          for (int t1 = 0; t1 < m; ++t1)
            acc += Expression::from_rational(
                       map.T[static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(s1)]) *
                   h[static_cast<std::size_t>(s1)]
                    [static_cast<std::size_t>(t1)]
                        .substitute(s) *
                   Expression::from_rational(
                       (*tinv)[static_cast<std::size_t>(t1)]
                              [static_cast<std::size_t>(b)]);
        out[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            acc / Expression::from_rational(jac);
      }
    return out;
  };
  ExprMat hExp = conj(orig.H);
  ExprMat kExp = conj(orig.K);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (!is_zero(got.H[a][b] - hExp[a][b]).zero) return false;
      if (!is_zero(got.K[a][b] - kExp[a][b]).zero) return false;
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int g = 0; g < m; ++g) {
        Expression acc;
        for (int s1 = 0; s1 < m; ++s1)
          for (int t1 = 0; t1 < m; ++t1)
            for (int e1 = 0; e1 < m; ++e1)
              acc += Expression::from_rational(
                         map.T[static_cast<std::size_t>(a)]
                              [static_cast<std::size_t>(s1)]) *
                     orig.S[static_cast<std::size_t>(s1)]
                           [static_cast<std::size_t>(t1)]
                           [static_cast<std::size_t>(e1)]
                               .substitute(s) *
                     Expression::from_rational(
                         (*tinv)[static_cast<std::size_t>(t1)]
                                [static_cast<std::size_t>(b)]) *
                     Expression::from_rational(
                         (*tinv)[static_cast<std::size_t>(e1)]
                                [static_cast<std::size_t>(g)]);
        if (!is_zero(got.S[a][b][g] - acc).zero) return false;
      }
  return true;
}

}  // namespace fgordon
