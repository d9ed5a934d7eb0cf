// Exact evaluation, MPFR-backed opaque-function evaluation, zero testing.

#include <mpfr.h>

#include <functional>
#include <sstream>

#include "expr_internal.hpp"

namespace fgordon {

using detail::Atom;

using detail::Polynomial;

namespace {

// 256-bit working precision for opaque functions; a value is treated as a
// numerical zero when it is below 2^-128 relative to the accumulated term
// magnitude.  Both constants are part of the documented contract for
// probabilistic answers.
constexpr mpfr_prec_t kPrec = 256;
constexpr long kZeroTolExp = 128;
constexpr int kPoleRetries = 16;

class BigFloat {
 public:
  BigFloat() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  explicit BigFloat(const Rational& q) {
    mpfr_init2(v_, kPrec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  BigFloat& add(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& mul(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& div(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat abs() const { BigFloat r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat pow_ui(unsigned long e) const {
    BigFloat r;
    mpfr_pow_ui(r.v_, v_, e, MPFR_RNDN);
    return r;
  }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // |this| <= |o| * 2^-tol
  bool negligible_against(const BigFloat& o, long tol) const {
    if (is_zero()) return true;
    BigFloat bound;
    mpfr_abs(bound.v_, o.v_, MPFR_RNDN);
    mpfr_mul_2si(bound.v_, bound.v_, -tol, MPFR_RNDN);
    BigFloat a = abs();
    return mpfr_cmp(a.v_, bound.v_) <= 0;
  }
  static BigFloat one() { return BigFloat(Rational(1)); }

 private:
  mpfr_t v_;
};

BigFloat apply_func(FuncKind f, const BigFloat& arg) {
  BigFloat r;
  switch (f) {
    case FuncKind::Exp:
      mpfr_exp(r.get(), arg.get(), MPFR_RNDN);
      break;
    case FuncKind::Log:
      if (arg.sign() <= 0) throw EvalError("log of a non-positive value");
      mpfr_log(r.get(), arg.get(), MPFR_RNDN);
      break;
    case FuncKind::Sin:
      mpfr_sin(r.get(), arg.get(), MPFR_RNDN);
      break;
    case FuncKind::Cos:
      mpfr_cos(r.get(), arg.get(), MPFR_RNDN);
      break;
  }
  if (!r.is_finite()) throw EvalError("opaque function evaluation overflowed");
  return r;
}

Rational to_rational(const BigFloat& f) {
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, f.get());
  Rational r(q);
  mpq_clear(q);
  return r;
}

struct ExactEval {
  const Point& point;
  bool exact = true;

  Rational atom_value(const Atom& a) {
    switch (a.tag) {
      case Atom::Tag::Coord: {
        auto it = point.coords.find(coord_key(a.coord));
        if (it == point.coords.end())
          throw EvalError("missing value for a coordinate");
        return it->second;
      }
      case Atom::Tag::Param: {
        auto it = point.params.find(a.param);
        if (it == point.params.end())
          throw EvalError("missing value for a parameter");
        return it->second;
      }
      case Atom::Tag::Func: {
        for (const auto& [kind, arg, value] : point.functions)
          if (kind == a.func &&
              detail::exprdata_cmp(*arg.data(), *a.arg) == 0)
            return value;
        Rational arg = eval_fraction(*a.arg);
        exact = false;
        BigFloat v = apply_func(a.func, BigFloat(arg));
        return to_rational(v);
      }
    }
    throw EvalError("unreachable atom tag");
  }

  Rational eval_poly(const Polynomial& p) {
    Rational total(0);
    for (const auto& t : p.terms) {
      Rational term = t.coef;
      for (const auto& [a, e] : t.mono.factors) {
        Rational v = atom_value(a);
        Rational pw(1);
        for (int i = 0; i < e; ++i) pw *= v;
        term *= pw;
      }
      total += term;
    }
    return total;
  }

  Rational eval_fraction(const ExprData& d) {
    Rational den = eval_poly(d.den);
    if (den == 0) throw PoleError("denominator vanished at the point");
    return eval_poly(d.num) / den;
  }
};

// Magnitude-tracked float evaluation for zero testing.  `mag` accumulates
// the sum of absolute term values, so catastrophic cancellation is detected
// by comparing |value| against mag.
struct MagEval {
  const Point& point;

  BigFloat atom_value(const Atom& a) {
    switch (a.tag) {
      case Atom::Tag::Coord: {
        auto it = point.coords.find(coord_key(a.coord));
        if (it == point.coords.end())
          throw EvalError("missing value for a coordinate");
        return BigFloat(it->second);
      }
      case Atom::Tag::Param: {
        auto it = point.params.find(a.param);
        if (it == point.params.end())
          throw EvalError("missing value for a parameter");
        return BigFloat(it->second);
      }
      case Atom::Tag::Func: {
        auto [v, mag] = eval_fraction(*a.arg);
        // A numerically-zero argument is snapped to exact zero so the
        // function value does not inherit cancellation noise.
        if (v.negligible_against(mag, kZeroTolExp)) v = BigFloat();
        return apply_func(a.func, v);
      }
    }
    throw EvalError("unreachable atom tag");
  }

  std::pair<BigFloat, BigFloat> eval_poly(const Polynomial& p) {
    BigFloat total, mag;
    for (const auto& t : p.terms) {
      BigFloat term{Rational(t.coef)};
      for (const auto& [a, e] : t.mono.factors)
        term.mul(atom_value(a).pow_ui(static_cast<unsigned long>(e)));
      if (!term.is_finite()) throw EvalError("overflow in evaluation");
      mag.add(term.abs());
      total.add(term);
    }
    return {total, mag};
  }

  std::pair<BigFloat, BigFloat> eval_fraction(const ExprData& d) {
    auto [dv, dm] = eval_poly(d.den);
    if (dv.negligible_against(dm, kZeroTolExp) || dv.is_zero())
      throw PoleError("denominator numerically vanished at the point");
    auto [nv, nm] = eval_poly(d.num);
    BigFloat value = nv;
    value.div(dv);
    BigFloat mag = nm;
    mag.div(dv.abs());
    if (!value.is_finite() || !mag.is_finite())
      throw EvalError("overflow in evaluation");
    return {value, mag};
  }
};

}  // namespace

EvalResult Expression::evaluate(const Point& p) const {
  ExactEval ev{p};
  Rational v = ev.eval_fraction(*data_);
  return EvalResult{std::move(v), ev.exact};
}

ZeroResult is_zero(const Expression& e, std::uint64_t seed) {
  if (e.is_structural_zero()) return {true, Certainty::Exact};
  if (!e.has_function_atoms()) return {false, Certainty::Exact};

  std::set<int> coords = e.coordinate_keys();
  std::set<int> params = e.parameter_indices();
  RationalSampler sampler(seed);
  int evaluated = 0;
  for (int attempt = 0;
       attempt < kSamplePoints + kPoleRetries && evaluated < kSamplePoints;
       ++attempt) {
    Point p;
    for (int key : coords) p.coords[key] = sampler.next();
    for (int i : params) p.params[i] = sampler.next();
    try {
      MagEval ev{p};
      auto [v, mag] = ev.eval_fraction(*e.data());
      ++evaluated;
      BigFloat floor = mag;
      if (mpfr_cmp_ui(floor.get(), 1) < 0) floor = BigFloat::one();
      if (!v.negligible_against(floor, kZeroTolExp))
        return {false, Certainty::Probabilistic};
    } catch (const PoleError&) {
      continue;  // resample
    } catch (const EvalError&) {
      continue;  // domain fault at this point; resample
    }
  }
  if (evaluated == 0) return {false, Certainty::Indeterminate};
  return {true, Certainty::Probabilistic};
}

}  // namespace fgordon
