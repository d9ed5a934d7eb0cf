#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fgordon/rational.hpp"

namespace fgordon {

// ---------------------------------------------------------------------------
// Jet coordinates
// ---------------------------------------------------------------------------

enum class CoordKind { X, Y, U, Ux, Uy, Uxx, Uxy, Uyy };

/// A single coordinate on the 2-jet.  `index` is the 1-based dependent
/// variable index for the U* kinds and 0 for X and Y.
struct Coordinate {
  CoordKind kind = CoordKind::X;
  int index = 0;

  static Coordinate x() { return {CoordKind::X, 0}; }
  static Coordinate y() { return {CoordKind::Y, 0}; }
  static Coordinate u(int a) { return {CoordKind::U, a}; }
  static Coordinate ux(int a) { return {CoordKind::Ux, a}; }
  static Coordinate uy(int a) { return {CoordKind::Uy, a}; }
  static Coordinate uxx(int a) { return {CoordKind::Uxx, a}; }
  static Coordinate uxy(int a) { return {CoordKind::Uxy, a}; }
  static Coordinate uyy(int a) { return {CoordKind::Uyy, a}; }

  bool is_gradient() const {
    return kind == CoordKind::Ux || kind == CoordKind::Uy;
  }
  bool is_second_order() const {
    return kind == CoordKind::Uxx || kind == CoordKind::Uxy ||
           kind == CoordKind::Uyy;
  }
};

/// Total order key: x < y < u^1 < u^1_x < u^1_y < u^1_xx < u^1_xy < u^1_yy
/// < u^2 < ...  This order fixes the canonical form of every expression.
int coord_key(const Coordinate& c);
Coordinate coord_from_key(int key);

inline bool operator==(const Coordinate& a, const Coordinate& b) {
  return a.kind == b.kind && a.index == b.index;
}
inline bool operator<(const Coordinate& a, const Coordinate& b) {
  return coord_key(a) < coord_key(b);
}

enum class FuncKind { Exp, Log, Sin, Cos };

const char* func_name(FuncKind f);

// ---------------------------------------------------------------------------
// Expression
// ---------------------------------------------------------------------------

struct ExprData;
using ExprPtr = std::shared_ptr<const ExprData>;

/// Errors surfaced by the kernel.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
};
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Certainty { Exact, Probabilistic, Indeterminate };

struct ZeroResult {
  bool zero = false;
  Certainty certainty = Certainty::Exact;
  explicit operator bool() const { return zero; }
};

/// Assignment of rational values to coordinates (by coord_key) and parameters.
/// `functions` optionally overrides the valuation of opaque atoms: the pair
/// (kind, argument) identifies the atom structurally.  Rank sampling uses
/// this to treat distinct opaque applications as independent indeterminates,
/// keeping every rank decision in exact rational arithmetic.
struct Point {
  std::map<int, Rational> coords;
  std::map<int, Rational> params;
  std::vector<std::tuple<FuncKind, class Expression, Rational>> functions;

  Point& set(const Coordinate& c, Rational v) {
    coords[coord_key(c)] = std::move(v);
    return *this;
  }
  Point& set_param(int i, Rational v) {
    params[i] = std::move(v);
    return *this;
  }
};

struct EvalResult {
  Rational value;
  bool exact = true;  // false once any opaque function was evaluated
};

/// Substitution of expressions for coordinates and parameters.
struct Substitution {
  std::map<int, class Expression> coords;  // key: coord_key
  std::map<int, class Expression> params;
};

/// Immutable symbolic expression over jet coordinates, free parameters and
/// opaque elementary function applications, with exact rational constants.
///
/// The internal representation is always the canonical form: a reduced
/// fraction of fully expanded multivariate polynomials over the atoms
/// (coordinates, parameters, function applications), the denominator monic
/// in the fixed graded-lex term order.  For function-free expressions,
/// structural equality therefore coincides with equality of rational
/// functions.  Opaque applications compare by the canonical form of their
/// arguments; no functional rewriting is performed.
class Expression {
 public:
  Expression();  // zero
  explicit Expression(ExprPtr data) : data_(std::move(data)) {}

  static Expression from_rational(const Rational& r);
  static Expression from_int(long n);
  static Expression coordinate(const Coordinate& c);
  static Expression parameter(int i);  // 1-based
  static Expression apply(FuncKind f, const Expression& arg);

  const ExprPtr& data() const { return data_; }

  // Arithmetic.  Every result is in canonical form.
  friend Expression operator+(const Expression&, const Expression&);
  friend Expression operator-(const Expression&, const Expression&);
  friend Expression operator*(const Expression&, const Expression&);
  friend Expression operator/(const Expression&, const Expression&);  // throws PoleError on zero divisor
  Expression operator-() const;
  Expression pow(long e) const;

  Expression& operator+=(const Expression& o) { return *this = *this + o; }
  Expression& operator-=(const Expression& o) { return *this = *this - o; }
  Expression& operator*=(const Expression& o) { return *this = *this * o; }
  Expression& operator/=(const Expression& o) { return *this = *this / o; }

  /// Structural (canonical-form) equality.
  bool operator==(const Expression& o) const;
  bool operator!=(const Expression& o) const { return !(*this == o); }

  /// True iff the canonical numerator is the zero polynomial.  For
  /// function-free expressions this decides mathematical zero exactly.
  bool is_structural_zero() const;
  bool is_one() const;
  /// Constant (atom-free) expression; returns its value if so.
  std::optional<Rational> as_rational() const;

  bool has_function_atoms() const;
  bool has_parameters() const;

  /// Distinct opaque applications occurring anywhere in the expression,
  /// each as (kind, argument).
  std::vector<std::pair<FuncKind, Expression>> function_atoms() const;

  /// Exact partial derivative treating every jet coordinate as independent.
  /// Opaque applications differentiate by the chain rule.
  Expression partial(const Coordinate& c) const;
  Expression partial_param(int i) const;

  Expression substitute(const Substitution& s) const;

  /// Degree of the numerator in the given coordinate; nullopt if the
  /// coordinate occurs in the denominator (non-polynomial dependence).
  std::optional<int> polynomial_degree(const Coordinate& c) const;

  /// All coordinates occurring anywhere (including inside function args).
  std::set<int> coordinate_keys() const;
  std::set<int> parameter_indices() const;
  bool contains(const Coordinate& c) const;
  bool contains_kind(CoordKind k) const;

  /// Exact evaluation.  Opaque functions are evaluated in 256-bit binary
  /// floating point (correctly rounded) and returned as the exact rational
  /// value of that approximation, with `exact` cleared.  Throws PoleError on
  /// vanishing denominators and EvalError on unassigned atoms or domain
  /// faults (log of a non-positive value).
  EvalResult evaluate(const Point& p) const;

  /// Deterministic total order on canonical forms (used for dedup and for
  /// ordering opaque atoms).
  static int compare(const Expression& a, const Expression& b);

 private:
  ExprPtr data_;
};

inline Expression operator+(const Expression& a, long b) {
  return a + Expression::from_int(b);
}
inline Expression operator*(long a, const Expression& b) {
  return Expression::from_int(a) * b;
}

// ---------------------------------------------------------------------------
// Zero testing
// ---------------------------------------------------------------------------

/// Exact decision for function-free expressions (canonical form).  With
/// opaque atoms: probabilistic, by evaluation at kSamplePoints random
/// rational points; zero is reported only when every evaluation vanishes
/// below the cancellation threshold.  Pole hits are resampled a bounded
/// number of times before reporting Indeterminate.
ZeroResult is_zero(const Expression& e, std::uint64_t seed = kDefaultSeed);

// ---------------------------------------------------------------------------
// Total derivatives on the equation manifold
// ---------------------------------------------------------------------------

enum class Direction { X, Y };

/// Total derivative constrained to the equation manifold of u^a_xy = rhs[a]:
/// every differentiation that would produce u^a_xy substitutes rhs[a].
/// Accepts inputs over (x, y, u, ux, uy, uxx, uyy); rejects Uxy and the
/// combinations that would escape that coordinate chart (Uxx with direction
/// X, Uyy with direction Y).
Expression total_derivative(const Expression& e, Direction dir,
                            std::span<const Expression> rhs);

/// Unconstrained total derivative on the free 2-jet (u_xy kept as a free
/// coordinate).  Input must be first-order.  Used by the Euler-Lagrange
/// operator.
Expression total_derivative_free(const Expression& e, Direction dir, int m);

// ---------------------------------------------------------------------------
// Naming and printing
// ---------------------------------------------------------------------------

/// Maps coordinates and parameters to surface-syntax identifiers.
/// Dependent names must be plain identifiers (letters/digits, starting with
/// a letter), pairwise distinct and distinct from "x"/"y" and the function
/// names.
struct NameTable {
  std::vector<std::string> dependent;
  std::vector<std::string> parameters;

  int m() const { return static_cast<int>(dependent.size()); }
  std::string coordinate_name(const Coordinate& c) const;
  std::string parameter_name(int i) const;
  void validate() const;  // throws std::invalid_argument
};

/// u | u,v | u,v,w | u1..um
NameTable default_names(int m);

std::string to_string(const Expression& e, const NameTable& names);

/// Recursive-descent parser for the expression grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' ['-'] integer)?
///   base   := integer | ident | func '(' expr ')' | '(' expr ')'
/// Identifiers are x, y, the declared dependent names with optional _x, _y,
/// _xx, _xy, _yy suffixes, and declared parameter names.  Whitespace is
/// insignificant.  Throws ParseError with a position on bad input.
Expression parse(const std::string& source, const NameTable& names);

/// Convenience: default names for m dependent variables.
Expression parse(const std::string& source, int m);

}  // namespace fgordon
