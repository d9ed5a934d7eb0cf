// Expression construction, arithmetic, differentiation, substitution.

#include <sstream>

#include "expr_internal.hpp"

namespace fgordon {

using detail::Atom;

using detail::Polynomial;

int coord_key(const Coordinate& c) {
  switch (c.kind) {
    case CoordKind::X:
      return 0;
    case CoordKind::Y:
      return 1;
    default:
      break;
  }
  int rank = 0;
  switch (c.kind) {
    case CoordKind::U:
      rank = 0;
      break;
    case CoordKind::Ux:
      rank = 1;
      break;
    case CoordKind::Uy:
      rank = 2;
      break;
    case CoordKind::Uxx:
      rank = 3;
      break;
    case CoordKind::Uxy:
      rank = 4;
      break;
    case CoordKind::Uyy:
      rank = 5;
      break;
    default:
      break;
  }
  return 2 + (c.index - 1) * 6 + rank;
}

Coordinate coord_from_key(int key) {
  if (key == 0) return Coordinate::x();
  if (key == 1) return Coordinate::y();
  int idx = (key - 2) / 6 + 1;
  int rank = (key - 2) % 6;
  static const CoordKind kinds[6] = {CoordKind::U,   CoordKind::Ux,
                                     CoordKind::Uy,  CoordKind::Uxx,
                                     CoordKind::Uxy, CoordKind::Uyy};
  return Coordinate{kinds[rank], idx};
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Exp:
      return "exp";
    case FuncKind::Log:
      return "log";
    case FuncKind::Sin:
      return "sin";
    case FuncKind::Cos:
      return "cos";
  }
  return "?";
}

namespace {

ExprPtr zero_data() {
  static const ExprPtr z = std::make_shared<const ExprData>(
      ExprData{Polynomial::zero(), Polynomial::constant(1)});
  return z;
}

ExprPtr from_polynomial(Polynomial p) {
  return detail::make_fraction(std::move(p), Polynomial::constant(1));
}

}  // namespace

Expression::Expression() : data_(zero_data()) {}

Expression Expression::from_rational(const Rational& r) {
  return Expression(from_polynomial(Polynomial::constant(r)));
}

Expression Expression::from_int(long n) {
  return from_rational(Rational(n));
}

Expression Expression::coordinate(const Coordinate& c) {
  return Expression(from_polynomial(Polynomial::atom(Atom::make_coord(c))));
}

Expression Expression::parameter(int i) {
  return Expression(from_polynomial(Polynomial::atom(Atom::make_param(i))));
}

Expression Expression::apply(FuncKind f, const Expression& arg) {
  return Expression(
      from_polynomial(Polynomial::atom(Atom::make_func(f, arg.data()))));
}

Expression operator+(const Expression& a, const Expression& b) {
  const ExprData& x = *a.data();
  const ExprData& y = *b.data();
  if (detail::poly_cmp(x.den, y.den) == 0) {
    return Expression(
        detail::make_fraction(detail::poly_add(x.num, y.num), x.den));
  }
  Polynomial num = detail::poly_add(detail::poly_mul(x.num, y.den),
                                    detail::poly_mul(y.num, x.den));
  return Expression(
      detail::make_fraction(std::move(num), detail::poly_mul(x.den, y.den)));
}

Expression operator-(const Expression& a, const Expression& b) {
  return a + (-b);
}

Expression Expression::operator-() const {
  const ExprData& x = *data_;
  return Expression(std::make_shared<const ExprData>(
      ExprData{detail::poly_neg(x.num), x.den}));
}

Expression operator*(const Expression& a, const Expression& b) {
  const ExprData& x = *a.data();
  const ExprData& y = *b.data();
  return Expression(detail::make_fraction(detail::poly_mul(x.num, y.num),
                                          detail::poly_mul(x.den, y.den)));
}

Expression operator/(const Expression& a, const Expression& b) {
  const ExprData& x = *a.data();
  const ExprData& y = *b.data();
  if (y.num.is_zero()) throw PoleError("division by zero expression");
  return Expression(detail::make_fraction(detail::poly_mul(x.num, y.den),
                                          detail::poly_mul(x.den, y.num)));
}

Expression Expression::pow(long e) const {
  const ExprData& x = *data_;
  if (e == 0) return from_int(1);
  if (e < 0) {
    if (x.num.is_zero()) throw PoleError("zero to a negative power");
    return Expression(detail::make_fraction(detail::poly_pow(x.den, -e),
                                            detail::poly_pow(x.num, -e)));
  }
  return Expression(detail::make_fraction(detail::poly_pow(x.num, e),
                                          detail::poly_pow(x.den, e)));
}

bool Expression::operator==(const Expression& o) const {
  return detail::exprdata_cmp(*data_, *o.data_) == 0;
}

int Expression::compare(const Expression& a, const Expression& b) {
  return detail::exprdata_cmp(*a.data_, *b.data_);
}

bool Expression::is_structural_zero() const { return data_->num.is_zero(); }

bool Expression::is_one() const {
  auto r = as_rational();
  return r && *r == 1;
}

std::optional<Rational> Expression::as_rational() const {
  const ExprData& x = *data_;
  if (!x.num.is_constant() || !x.den.is_constant()) return std::nullopt;
  if (x.num.is_zero()) return Rational(0);
  return x.num.terms[0].coef;  // den is monic constant 1
}

namespace {

void collect_atoms(const ExprData& d, std::vector<Atom>& out);

void collect_atoms_poly(const Polynomial& p, std::vector<Atom>& out) {
  for (const Atom& a : detail::poly_atoms(p)) {
    bool seen = false;
    for (const auto& s : out)
      if (detail::atom_eq(s, a)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(a);
    if (a.tag == Atom::Tag::Func) collect_atoms(*a.arg, out);
  }
}

void collect_atoms(const ExprData& d, std::vector<Atom>& out) {
  collect_atoms_poly(d.num, out);
  collect_atoms_poly(d.den, out);
}

}  // namespace

bool Expression::has_function_atoms() const {
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  for (const auto& a : atoms)
    if (a.tag == Atom::Tag::Func) return true;
  return false;
}

bool Expression::has_parameters() const {
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  for (const auto& a : atoms)
    if (a.tag == Atom::Tag::Param) return true;
  return false;
}

std::vector<std::pair<FuncKind, Expression>> Expression::function_atoms()
    const {
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  std::vector<std::pair<FuncKind, Expression>> out;
  for (const auto& a : atoms)
    if (a.tag == Atom::Tag::Func) out.emplace_back(a.func, Expression(a.arg));
  return out;
}

std::set<int> Expression::coordinate_keys() const {
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  std::set<int> keys;
  for (const auto& a : atoms)
    if (a.tag == Atom::Tag::Coord) keys.insert(coord_key(a.coord));
  return keys;
}

std::set<int> Expression::parameter_indices() const {
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  std::set<int> idx;
  for (const auto& a : atoms)
    if (a.tag == Atom::Tag::Param) idx.insert(a.param);
  return idx;
}

bool Expression::contains(const Coordinate& c) const {
  return coordinate_keys().count(coord_key(c)) > 0;
}

bool Expression::contains_kind(CoordKind k) const {
  for (int key : coordinate_keys())
    if (coord_from_key(key).kind == k) return true;
  return false;
}

namespace {

// d(atom)/d(c) as an expression; zero for unrelated atoms, chain rule for
// function applications.
Expression atom_partial(const Atom& a, const Coordinate& c) {
  switch (a.tag) {
    case Atom::Tag::Coord:
      return a.coord == c ? Expression::from_int(1) : Expression();
    case Atom::Tag::Param:
      return Expression();
    case Atom::Tag::Func: {
      Expression arg(a.arg);
      Expression darg = arg.partial(c);
      if (darg.is_structural_zero()) return Expression();
      switch (a.func) {
        case FuncKind::Exp:
          return Expression::apply(FuncKind::Exp, arg) * darg;
        case FuncKind::Log:
          return darg / arg;
        case FuncKind::Sin:
          return Expression::apply(FuncKind::Cos, arg) * darg;
        case FuncKind::Cos:
          return -(Expression::apply(FuncKind::Sin, arg) * darg);
      }
      return Expression();
    }
  }
  return Expression();
}

Expression atom_partial_param(const Atom& a, int i) {
  switch (a.tag) {
    case Atom::Tag::Coord:
      return Expression();
    case Atom::Tag::Param:
      return a.param == i ? Expression::from_int(1) : Expression();
    case Atom::Tag::Func: {
      Expression arg(a.arg);
      Expression darg = arg.partial_param(i);
      if (darg.is_structural_zero()) return Expression();
      switch (a.func) {
        case FuncKind::Exp:
          return Expression::apply(FuncKind::Exp, arg) * darg;
        case FuncKind::Log:
          return darg / arg;
        case FuncKind::Sin:
          return Expression::apply(FuncKind::Cos, arg) * darg;
        case FuncKind::Cos:
          return -(Expression::apply(FuncKind::Sin, arg) * darg);
      }
      return Expression();
    }
  }
  return Expression();
}

template <typename AtomDeriv>
Expression poly_derivative(const Polynomial& p, AtomDeriv&& datom) {
  Expression total;
  for (const Atom& a : detail::poly_atoms(p)) {
    Expression da = datom(a);
    if (da.is_structural_zero()) continue;
    Polynomial dp = detail::poly_derivative_indep(p, a);
    if (dp.is_zero()) continue;
    total += Expression(detail::make_fraction(std::move(dp),
                                              Polynomial::constant(1))) *
             da;
  }
  return total;
}

template <typename AtomDeriv>
Expression fraction_derivative(const ExprData& d, AtomDeriv&& datom) {
  Expression dnum = poly_derivative(d.num, datom);
  if (d.den.is_constant()) return dnum;  // den is monic 1
  Expression dden = poly_derivative(d.den, datom);
  Expression num(detail::make_fraction(d.num, Polynomial::constant(1)));
  Expression den(detail::make_fraction(d.den, Polynomial::constant(1)));
  return (dnum * den - num * dden) / (den * den);
}

}  // namespace

Expression Expression::partial(const Coordinate& c) const {
  return fraction_derivative(
      *data_, [&c](const Atom& a) { return atom_partial(a, c); });
}

Expression Expression::partial_param(int i) const {
  return fraction_derivative(
      *data_, [i](const Atom& a) { return atom_partial_param(a, i); });
}

namespace {

Expression subst_poly(const Polynomial& p, const Substitution& s);

Expression subst_atom(const Atom& a, const Substitution& s) {
  switch (a.tag) {
    case Atom::Tag::Coord: {
      auto it = s.coords.find(coord_key(a.coord));
      if (it != s.coords.end()) return it->second;
      return Expression::coordinate(a.coord);
    }
    case Atom::Tag::Param: {
      auto it = s.params.find(a.param);
      if (it != s.params.end()) return it->second;
      return Expression::parameter(a.param);
    }
    case Atom::Tag::Func: {
      const ExprData& arg = *a.arg;
      Expression sn = subst_poly(arg.num, s);
      Expression sd = subst_poly(arg.den, s);
      return Expression::apply(a.func, sn / sd);
    }
  }
  return Expression();
}

Expression subst_poly(const Polynomial& p, const Substitution& s) {
  Expression total;
  for (const auto& t : p.terms) {
    Expression term = Expression::from_rational(t.coef);
    for (const auto& [a, e] : t.mono.factors)
      term *= subst_atom(a, s).pow(e);
    total += term;
  }
  return total;
}

}  // namespace

Expression Expression::substitute(const Substitution& s) const {
  Expression num = subst_poly(data_->num, s);
  Expression den = subst_poly(data_->den, s);
  return num / den;
}

std::optional<int> Expression::polynomial_degree(const Coordinate& c) const {
  Atom a = Atom::make_coord(c);
  for (const Atom& s : detail::poly_atoms(data_->den))
    if (detail::atom_eq(s, a)) return std::nullopt;
  // Dependence through function arguments is non-polynomial too.
  std::vector<Atom> atoms;
  collect_atoms(*data_, atoms);
  for (const Atom& s : atoms)
    if (s.tag == Atom::Tag::Func) {
      Expression arg(s.arg);
      if (arg.contains(c)) return std::nullopt;
    }
  int d = 0;
  for (const auto& t : data_->num.terms)
    for (const auto& [atom, e] : t.mono.factors)
      if (detail::atom_eq(atom, a)) d = std::max(d, e);
  return d;
}

// ---------------------------------------------------------------------------
// Total derivatives
// ---------------------------------------------------------------------------

Expression total_derivative(const Expression& e, Direction dir,
                            std::span<const Expression> rhs) {
  if (e.contains_kind(CoordKind::Uxy))
    throw std::invalid_argument(
        "total_derivative: input contains u_xy; it is not a coordinate on "
        "the equation manifold");
  int m = static_cast<int>(rhs.size());
  const bool dx = dir == Direction::X;
  if ((dx && e.contains_kind(CoordKind::Uxx)) ||
      (!dx && e.contains_kind(CoordKind::Uyy)))
    throw std::invalid_argument(
        "total_derivative: would leave the second-order chart");
  Expression r = e.partial(dx ? Coordinate::x() : Coordinate::y());
  for (int a = 1; a <= m; ++a) {
    Expression du = e.partial(Coordinate::u(a));
    Expression dux = e.partial(Coordinate::ux(a));
    Expression duy = e.partial(Coordinate::uy(a));
    if (dx) {
      r += Expression::coordinate(Coordinate::ux(a)) * du;
      r += Expression::coordinate(Coordinate::uxx(a)) * dux;
      r += rhs[static_cast<std::size_t>(a - 1)] * duy;
      Expression duyy = e.partial(Coordinate::uyy(a));
      if (!duyy.is_structural_zero()) {
        // u_xyy = D_y f^a on the equation manifold
        r += total_derivative(rhs[static_cast<std::size_t>(a - 1)],
                              Direction::Y, rhs) *
             duyy;
      }
    } else {
      r += Expression::coordinate(Coordinate::uy(a)) * du;
      r += rhs[static_cast<std::size_t>(a - 1)] * dux;
      r += Expression::coordinate(Coordinate::uyy(a)) * duy;
      Expression duxx = e.partial(Coordinate::uxx(a));
      if (!duxx.is_structural_zero()) {
        r += total_derivative(rhs[static_cast<std::size_t>(a - 1)],
                              Direction::X, rhs) *
             duxx;
      }
    }
  }
  return r;
}

Expression total_derivative_free(const Expression& e, Direction dir, int m) {
  for (int a = 1; a <= m; ++a)
    if (e.contains(Coordinate::uxx(a)) || e.contains(Coordinate::uxy(a)) ||
        e.contains(Coordinate::uyy(a)))
      throw std::invalid_argument(
          "total_derivative_free: input must be first order");
  const bool dx = dir == Direction::X;
  Expression r = e.partial(dx ? Coordinate::x() : Coordinate::y());
  for (int a = 1; a <= m; ++a) {
    Expression du = e.partial(Coordinate::u(a));
    Expression dux = e.partial(Coordinate::ux(a));
    Expression duy = e.partial(Coordinate::uy(a));
    if (dx) {
      r += Expression::coordinate(Coordinate::ux(a)) * du;
      r += Expression::coordinate(Coordinate::uxx(a)) * dux;
      r += Expression::coordinate(Coordinate::uxy(a)) * duy;
    } else {
      r += Expression::coordinate(Coordinate::uy(a)) * du;
      r += Expression::coordinate(Coordinate::uxy(a)) * dux;
      r += Expression::coordinate(Coordinate::uyy(a)) * duy;
    }
  }
  return r;
}

}  // namespace fgordon
