#include "fgordon/liealgebra.hpp"

#include <stdexcept>

#include "fgordon/multspace.hpp"

namespace fgordon {

StructureConstants make_structure_constants(
    int m, std::vector<std::vector<QVector>> c, bool complete_antisymmetry) {
  if (m < 1) throw std::invalid_argument("structure constants: m >= 1");
  if (static_cast<int>(c.size()) != m)
    throw std::invalid_argument("structure constants: wrong shape");
  for (auto& plane : c) {
    if (static_cast<int>(plane.size()) != m)
      throw std::invalid_argument("structure constants: wrong shape");
    for (auto& row : plane)
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument("structure constants: wrong shape");
  }
  StructureConstants sc;
  sc.m = m;
  sc.c = std::move(c);
  if (complete_antisymmetry) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int g = b + 1; g < m; ++g) {
          Rational& upper = sc.c[static_cast<std::size_t>(a)]
                                [static_cast<std::size_t>(b)]
                                [static_cast<std::size_t>(g)];
          Rational& lower = sc.c[static_cast<std::size_t>(a)]
                                [static_cast<std::size_t>(g)]
                                [static_cast<std::size_t>(b)];
          if (upper != 0 && lower != 0 && upper != -lower)
            throw std::invalid_argument(
                "structure constants: conflicting entries for an index pair");
          if (lower == 0)
            lower = -upper;
          else
            upper = -lower;
        }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        sc.c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
            [static_cast<std::size_t>(b)] = 0;
  }
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      for (int g = 1; g <= m; ++g)
        if (sc.at(a, b, g) != -sc.at(a, g, b))
          throw std::invalid_argument(
              "structure constants: antisymmetry fails");
  // Jacobi: sum_s C^s_{bg} C^a_{sd} + C^s_{gd} C^a_{sb} + C^s_{db} C^a_{sg} = 0
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      for (int g = 1; g <= m; ++g)
        for (int d = 1; d <= m; ++d) {
          Rational acc(0);
          for (int s = 1; s <= m; ++s)
            acc += sc.at(s, b, g) * sc.at(a, s, d) +
                   sc.at(s, g, d) * sc.at(a, s, b) +
                   sc.at(s, d, b) * sc.at(a, s, g);
          if (acc != 0)
            throw std::invalid_argument(
                "structure constants: Jacobi identity fails");
        }
  return sc;
}

QMatrix killing_form(const StructureConstants& sc) {
  const int m = sc.m;
  QMatrix k(static_cast<std::size_t>(m), QVector(static_cast<std::size_t>(m)));
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      Rational acc(0);
      for (int s = 1; s <= m; ++s)
        for (int t = 1; t <= m; ++t) acc += sc.at(s, a, t) * sc.at(t, b, s);
      k[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] = acc;
    }
  return k;
}

bool is_biinvariant(const QMatrix& M, const StructureConstants& sc) {
  const int m = sc.m;
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      for (int e = 1; e <= m; ++e) {
        Rational acc(0);
        for (int g = 1; g <= m; ++g)
          acc += M[static_cast<std::size_t>(a - 1)]
                  [static_cast<std::size_t>(g - 1)] *
                     sc.at(g, b, e) +
                 M[static_cast<std::size_t>(b - 1)]
                  [static_cast<std::size_t>(g - 1)] *
                     sc.at(g, a, e);
        if (acc != 0) return false;
      }
  return true;
}

std::vector<QMatrix> biinvariant_forms(const StructureConstants& sc) {
  const int m = sc.m;
  const int n = unknown_count(m);
  QMatrix rows;
  for (int a = 1; a <= m; ++a)
    for (int b = a; b <= m; ++b)
      for (int e = 1; e <= m; ++e) {
        QVector row(static_cast<std::size_t>(n), Rational(0));
        for (int g = 1; g <= m; ++g) {
          row[static_cast<std::size_t>(unknown_index(a, g, m))] +=
              sc.at(g, b, e);
          row[static_cast<std::size_t>(unknown_index(b, g, m))] +=
              sc.at(g, a, e);
        }
        rows.push_back(std::move(row));
      }
  std::vector<QMatrix> out;
  for (const auto& vec : nullspace(rows, n)) {
    QMatrix M(static_cast<std::size_t>(m), QVector(static_cast<std::size_t>(m)));
    for (int u = 0; u < n; ++u) {
      auto [a, b] = unknown_pair(u, m);
      M[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] =
          vec[static_cast<std::size_t>(u)];
      M[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] =
          vec[static_cast<std::size_t>(u)];
    }
    out.push_back(std::move(M));
  }
  return out;
}

FGordonSystem lie_system(const StructureConstants& sc) {
  const int m = sc.m;
  NameTable names = default_names(m);
  ExprVec f(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    Expression acc;
    for (int b = 1; b <= m; ++b)
      for (int g = 1; g <= m; ++g) {
        const Rational& c = sc.at(a, b, g);
        if (c != 0)
          acc += Expression::from_rational(c) *
                 Expression::coordinate(Coordinate::ux(b)) *
                 Expression::coordinate(Coordinate::uy(g));
      }
    f[static_cast<std::size_t>(a - 1)] = -acc;
  }
  FGordonSystem sys = make_system(m, std::move(f), names);
  check_normal_form(sys);
  return sys;
}

Lagrangian lie_lagrangian(const QMatrix& M, const StructureConstants& sc) {
  if (!is_biinvariant(M, sc))
    throw std::invalid_argument(
        "lie_lagrangian: M does not solve the bi-invariance condition");
  const int m = sc.m;
  // L = -(1/6) M_{ab} (3 u^a_x u^b_y - 2 C^a_{et} u^b u^e_x u^t_y)
  Expression L;
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      const Rational& mab = M[static_cast<std::size_t>(a - 1)]
                             [static_cast<std::size_t>(b - 1)];
      if (mab == 0) continue;
      Expression inner = 3 * (Expression::coordinate(Coordinate::ux(a)) *
                              Expression::coordinate(Coordinate::uy(b)));
      for (int e = 1; e <= m; ++e)
        for (int t = 1; t <= m; ++t) {
          const Rational& c = sc.at(a, e, t);
          if (c != 0)
            inner -= 2 * (Expression::from_rational(c) *
                          Expression::coordinate(Coordinate::u(b)) *
                          Expression::coordinate(Coordinate::ux(e)) *
                          Expression::coordinate(Coordinate::uy(t)));
        }
      L += Expression::from_rational(mab) * inner;
    }
  L = L * Expression::from_rational(Rational(-1, 6));
  return Lagrangian::from_expression(L);
}

}  // namespace fgordon
