#pragma once

// Internal representation of expressions: distributed multivariate
// polynomials over "atoms" (coordinates, parameters, opaque function
// applications) with exact rational coefficients, and reduced fractions
// thereof.  Not part of the public API.

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <vector>

#include "fgordon/symexpr.hpp"

namespace fgordon::detail {

struct Atom {
  enum class Tag { Coord, Param, Func };
  Tag tag = Tag::Coord;
  Coordinate coord{};
  int param = 0;
  FuncKind func = FuncKind::Exp;
  ExprPtr arg;  // only for Tag::Func; canonical form

  static Atom make_coord(const Coordinate& c) {
    Atom a;
    a.tag = Tag::Coord;
    a.coord = c;
    return a;
  }
  static Atom make_param(int i) {
    Atom a;
    a.tag = Tag::Param;
    a.param = i;
    return a;
  }
  static Atom make_func(FuncKind f, ExprPtr arg) {
    Atom a;
    a.tag = Tag::Func;
    a.func = f;
    a.arg = std::move(arg);
    return a;
  }
};

int atom_cmp(const Atom& a, const Atom& b);

inline bool atom_eq(const Atom& a, const Atom& b) { return atom_cmp(a, b) == 0; }

/// Product of atom powers, factors sorted by atom_cmp ascending, exponents
/// >= 1.  The empty monomial is 1.
struct Monomial {
  std::vector<std::pair<Atom, int>> factors;

  int total_degree() const {
    int d = 0;
    for (const auto& [a, e] : factors) d += e;
    return d;
  }
  bool is_one() const { return factors.empty(); }
};

/// Graded-lex order: total degree first; ties broken so that the monomial
/// holding the smaller atom (or the larger exponent on an equal atom) is the
/// larger one.  A proper multiplicative monomial order.
int monomial_cmp(const Monomial& a, const Monomial& b);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
/// a / b if b divides a.
std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Sparse polynomial; terms sorted descending by monomial_cmp, coefficients
/// nonzero.  terms.front() is the leading term.
struct Polynomial {
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms[0].mono.is_one());
  }
  static Polynomial zero() { return {}; }
  static Polynomial constant(const Rational& r);
  static Polynomial atom(const Atom& a);
};

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
Polynomial poly_neg(const Polynomial& a);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& a, const Rational& c);
Polynomial poly_pow(const Polynomial& a, long e);  // e >= 0
int poly_cmp(const Polynomial& a, const Polynomial& b);

/// Exact division; nullopt when b does not divide a.
std::optional<Polynomial> poly_divexact(const Polynomial& a,
                                        const Polynomial& b);

/// Multivariate gcd over Q[atoms] (primitive pseudo-remainder sequences),
/// normalized to leading coefficient 1.  gcd(0, 0) = 0.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// Derivative treating the given atom as an independent variable (no chain
/// rule through function arguments; that lives at the Expression level).
Polynomial poly_derivative_indep(const Polynomial& p, const Atom& a);

/// All distinct atoms occurring in p (top level only).
std::vector<Atom> poly_atoms(const Polynomial& p);

}  // namespace fgordon::detail

namespace fgordon {

/// Canonical reduced fraction.  den is never the zero polynomial; the
/// leading coefficient of den is 1; num is the zero polynomial iff the
/// expression is zero (in which case den is 1).
struct ExprData {
  detail::Polynomial num;
  detail::Polynomial den;
};

}  // namespace fgordon

namespace fgordon::detail {

int exprdata_cmp(const ExprData& a, const ExprData& b);

/// Builds the canonical fraction (reduces, normalizes scale).  Throws
/// PoleError if den is the zero polynomial.
ExprPtr make_fraction(Polynomial num, Polynomial den);

const ExprData& expr_data(const Expression& e);

}  // namespace fgordon::detail
