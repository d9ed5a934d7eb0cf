// Polynomial core: arithmetic, exact division, multivariate gcd.

#include <stdexcept>

#include "expr_internal.hpp"

namespace fgordon::detail {

int atom_cmp(const Atom& a, const Atom& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  switch (a.tag) {
    case Atom::Tag::Coord: {
      int ka = coord_key(a.coord), kb = coord_key(b.coord);
      return ka < kb ? -1 : ka > kb ? 1 : 0;
    }
    case Atom::Tag::Param:
      return a.param < b.param ? -1 : a.param > b.param ? 1 : 0;
    case Atom::Tag::Func: {
      if (a.func != b.func) return a.func < b.func ? -1 : 1;
      return exprdata_cmp(*a.arg, *b.arg);
    }
  }
  return 0;
}

int monomial_cmp(const Monomial& a, const Monomial& b) {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = atom_cmp(a.factors[i].first, b.factors[i].first);
    if (c != 0) return c < 0 ? 1 : -1;  // smaller atom => larger monomial
    if (a.factors[i].second != b.factors[i].second)
      return a.factors[i].second > b.factors[i].second ? 1 : -1;
  }
  // Equal degree and equal prefix forces equal factor lists.
  return 0;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    int c = atom_cmp(a.factors[i].first, b.factors[j].first);
    if (c < 0) {
      r.factors.push_back(a.factors[i++]);
    } else if (c > 0) {
      r.factors.push_back(b.factors[j++]);
    } else {
      r.factors.emplace_back(a.factors[i].first,
                             a.factors[i].second + b.factors[j].second);
      ++i;
      ++j;
    }
  }
  while (i < a.factors.size()) r.factors.push_back(a.factors[i++]);
  while (j < b.factors.size()) r.factors.push_back(b.factors[j++]);
  return r;
}

std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0;
  for (const auto& [atom, exp] : b.factors) {
    while (i < a.factors.size() && atom_cmp(a.factors[i].first, atom) < 0)
      r.factors.push_back(a.factors[i++]);
    if (i == a.factors.size() || atom_cmp(a.factors[i].first, atom) != 0 ||
        a.factors[i].second < exp)
      return std::nullopt;
    if (a.factors[i].second > exp)
      r.factors.emplace_back(atom, a.factors[i].second - exp);
    ++i;
  }
  while (i < a.factors.size()) r.factors.push_back(a.factors[i++]);
  return r;
}

Polynomial Polynomial::constant(const Rational& r) {
  Polynomial p;
  if (r != 0) p.terms.push_back({Monomial{}, r});
  return p;
}

Polynomial Polynomial::atom(const Atom& a) {
  Polynomial p;
  Monomial m;
  m.factors.emplace_back(a, 1);
  p.terms.push_back({std::move(m), Rational(1)});
  return p;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.terms.reserve(a.terms.size() + b.terms.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    int c = monomial_cmp(a.terms[i].mono, b.terms[j].mono);
    if (c > 0) {
      r.terms.push_back(a.terms[i++]);
    } else if (c < 0) {
      r.terms.push_back(b.terms[j++]);
    } else {
      Rational s = a.terms[i].coef + b.terms[j].coef;
      if (s != 0) r.terms.push_back({a.terms[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  while (i < a.terms.size()) r.terms.push_back(a.terms[i++]);
  while (j < b.terms.size()) r.terms.push_back(b.terms[j++]);
  return r;
}

Polynomial poly_neg(const Polynomial& a) {
  Polynomial r = a;
  for (auto& t : r.terms) t.coef = -t.coef;
  return r;
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
  return poly_add(a, poly_neg(b));
}

Polynomial poly_scale(const Polynomial& a, const Rational& c) {
  if (c == 0) return Polynomial::zero();
  Polynomial r = a;
  for (auto& t : r.terms) t.coef *= c;
  return r;
}

namespace {

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return monomial_cmp(a, b) > 0;  // descending
  }
};

Polynomial from_accum(std::map<Monomial, Rational, MonoLess>&& acc) {
  Polynomial r;
  r.terms.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) r.terms.push_back({m, std::move(c)});
  return r;
}

}  // namespace

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial::zero();
  std::map<Monomial, Rational, MonoLess> acc;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      Monomial m = monomial_mul(ta.mono, tb.mono);
      acc[std::move(m)] += ta.coef * tb.coef;
    }
  return from_accum(std::move(acc));
}

Polynomial poly_pow(const Polynomial& a, long e) {
  if (e < 0) throw std::invalid_argument("poly_pow: negative exponent");
  Polynomial r = Polynomial::constant(1);
  Polynomial base = a;
  while (e > 0) {
    if (e & 1) r = poly_mul(r, base);
    e >>= 1;
    if (e) base = poly_mul(base, base);
  }
  return r;
}

int poly_cmp(const Polynomial& a, const Polynomial& b) {
  std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = monomial_cmp(a.terms[i].mono, b.terms[i].mono);
    if (c != 0) return c;
    int s = cmp(a.terms[i].coef, b.terms[i].coef);
    if (s != 0) return s;
  }
  if (a.terms.size() != b.terms.size())
    return a.terms.size() < b.terms.size() ? -1 : 1;
  return 0;
}

std::optional<Polynomial> poly_divexact(const Polynomial& a,
                                        const Polynomial& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Polynomial::zero();
  Polynomial rem = a;
  std::map<Monomial, Rational, MonoLess> quo;
  while (!rem.is_zero()) {
    auto md = monomial_div(rem.terms[0].mono, b.terms[0].mono);
    if (!md) return std::nullopt;
    Rational c = rem.terms[0].coef / b.terms[0].coef;
    // rem -= c * md * b
    Polynomial piece;
    piece.terms.reserve(b.terms.size());
    for (const auto& t : b.terms)
      piece.terms.push_back({monomial_mul(*md, t.mono), t.coef * c});
    // piece term order is preserved by multiplicativity of the order.
    rem = poly_sub(rem, piece);
    quo[*md] += c;
  }
  return from_accum(std::move(quo));
}

namespace {

// --- univariate view helpers for gcd ---------------------------------------

int degree_in(const Polynomial& p, const Atom& x) {
  int d = 0;
  for (const auto& t : p.terms)
    for (const auto& [a, e] : t.mono.factors)
      if (atom_eq(a, x)) d = std::max(d, e);
  return d;
}

// Coefficient of x^k in p, a polynomial in the remaining atoms.
Polynomial coeff_in(const Polynomial& p, const Atom& x, int k) {
  Polynomial r;
  for (const auto& t : p.terms) {
    int e = 0;
    Monomial rest;
    for (const auto& [a, ee] : t.mono.factors) {
      if (atom_eq(a, x))
        e = ee;
      else
        rest.factors.emplace_back(a, ee);
    }
    if (e == k) r.terms.push_back({std::move(rest), t.coef});
  }
  std::sort(r.terms.begin(), r.terms.end(), [](const Term& a, const Term& b) {
    return monomial_cmp(a.mono, b.mono) > 0;
  });
  return r;
}

Polynomial times_power(const Polynomial& p, const Atom& x, int k) {
  if (k == 0) return p;
  Monomial xa;
  xa.factors.emplace_back(x, k);
  Polynomial r;
  r.terms.reserve(p.terms.size());
  for (const auto& t : p.terms)
    r.terms.push_back({monomial_mul(t.mono, xa), t.coef});
  std::sort(r.terms.begin(), r.terms.end(), [](const Term& a, const Term& b) {
    return monomial_cmp(a.mono, b.mono) > 0;
  });
  return r;
}

Polynomial normalize_lead(const Polynomial& p) {
  if (p.is_zero()) return p;
  return poly_scale(p, Rational(1) / p.terms[0].coef);
}

// Highest atom occurring in p, or nullopt if constant.
std::optional<Atom> main_atom(const Polynomial& p, std::optional<Atom> best) {
  for (const auto& t : p.terms)
    for (const auto& [a, e] : t.mono.factors)
      if (!best || atom_cmp(a, *best) > 0) best = a;
  return best;
}

// content (gcd of the x-coefficients) and primitive part wrt x.
std::pair<Polynomial, Polynomial> content_pp(const Polynomial& p,
                                             const Atom& x) {
  int d = degree_in(p, x);
  Polynomial cont = Polynomial::zero();
  std::vector<Polynomial> coeffs(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    coeffs[static_cast<std::size_t>(k)] = coeff_in(p, x, k);
    cont = poly_gcd(cont, coeffs[static_cast<std::size_t>(k)]);
  }
  Polynomial pp;
  for (int k = 0; k <= d; ++k) {
    const Polynomial& ck = coeffs[static_cast<std::size_t>(k)];
    if (ck.is_zero()) continue;
    auto q = poly_divexact(ck, cont);
    assert(q);
    pp = poly_add(pp, times_power(*q, x, k));
  }
  return {cont, pp};
}

Polynomial pseudo_rem(Polynomial r, const Polynomial& q, const Atom& x) {
  int dq = degree_in(q, x);
  Polynomial lq = coeff_in(q, x, dq);
  while (!r.is_zero()) {
    int dr = degree_in(r, x);
    if (dr < dq) break;
    Polynomial lr = coeff_in(r, x, dr);
    // r := lq*r - lr*x^(dr-dq)*q
    r = poly_sub(poly_mul(lq, r),
                 poly_mul(times_power(lr, x, dr - dq), q));
  }
  return r;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return normalize_lead(b);
  if (b.is_zero()) return normalize_lead(a);
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);
  std::optional<Atom> x = main_atom(a, std::nullopt);
  x = main_atom(b, x);
  assert(x);
  auto [ca, pa] = content_pp(a, *x);
  auto [cb, pb] = content_pp(b, *x);
  Polynomial cont = poly_gcd(ca, cb);

  Polynomial p = pa, q = pb;
  if (degree_in(p, *x) < degree_in(q, *x)) std::swap(p, q);
  Polynomial g;
  while (true) {
    Polynomial r = pseudo_rem(p, q, *x);
    if (r.is_zero()) {
      g = q;
      break;
    }
    if (degree_in(r, *x) == 0) {
      g = Polynomial::constant(1);
      break;
    }
    r = content_pp(r, *x).second;
    p = std::move(q);
    q = std::move(r);
  }
  if (!g.is_constant()) g = content_pp(g, *x).second;
  return normalize_lead(poly_mul(cont, g));
}

Polynomial poly_derivative_indep(const Polynomial& p, const Atom& a) {
  Polynomial r;
  for (const auto& t : p.terms) {
    for (std::size_t i = 0; i < t.mono.factors.size(); ++i) {
      if (!atom_eq(t.mono.factors[i].first, a)) continue;
      int e = t.mono.factors[i].second;
      Term d;
      d.coef = t.coef * e;
      d.mono = t.mono;
      if (e == 1)
        d.mono.factors.erase(d.mono.factors.begin() +
                             static_cast<std::ptrdiff_t>(i));
      else
        d.mono.factors[i].second = e - 1;
      Polynomial one;
      one.terms.push_back(std::move(d));
      r = poly_add(r, one);
      break;  // atoms are distinct within a monomial
    }
  }
  return r;
}

std::vector<Atom> poly_atoms(const Polynomial& p) {
  std::vector<Atom> out;
  for (const auto& t : p.terms)
    for (const auto& [a, e] : t.mono.factors) {
      bool seen = false;
      for (const auto& s : out)
        if (atom_eq(s, a)) {
          seen = true;
          break;
        }
      if (!seen) out.push_back(a);
    }
  return out;
}

int exprdata_cmp(const ExprData& a, const ExprData& b) {
  int c = poly_cmp(a.num, b.num);
  if (c != 0) return c;
  return poly_cmp(a.den, b.den);
}

ExprPtr make_fraction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw PoleError("division by zero expression");
  if (num.is_zero())
    return std::make_shared<const ExprData>(
        ExprData{Polynomial::zero(), Polynomial::constant(1)});
  if (!den.is_constant()) {
    Polynomial g = poly_gcd(num, den);
    if (!g.is_constant()) {
      auto qn = poly_divexact(num, g);
      auto qd = poly_divexact(den, g);
      assert(qn && qd);
      num = std::move(*qn);
      den = std::move(*qd);
    }
  }
  Rational lc = den.terms[0].coef;
  if (lc != 1) {
    den = poly_scale(den, Rational(1) / lc);
    num = poly_scale(num, Rational(1) / lc);
  }
  return std::make_shared<const ExprData>(
      ExprData{std::move(num), std::move(den)});
}

const ExprData& expr_data(const Expression& e) { return *e.data(); }

}  // namespace fgordon::detail
