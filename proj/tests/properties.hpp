#pragma once

// Shared fuzz generators and the exact property suites used by both the
// per-module tests and the acceptance runner.  Every function returns a
// list of human-readable failures (empty = pass).

#include <sstream>
#include <string>
#include <vector>

#include "fgordon/classify2d.hpp"
#include "fgordon/corpus.hpp"
#include "fgordon/varlagrange.hpp"
#include "oracle.hpp"

namespace fgordon::testing {

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Sparse random polynomial over the given coordinates.
inline Expression random_poly(RationalSampler& rng,
                              const std::vector<Coordinate>& vars, int degree,
                              int terms, long coeff_bound = 3) {
  Expression e;
  for (int t = 0; t < terms; ++t) {
    long num = rng.next_int(-coeff_bound, coeff_bound);
    if (num == 0) continue;
    Expression mono = Expression::from_rational(
        Rational(num, rng.next_int(1, 2)));
    int d = static_cast<int>(rng.next_int(0, degree));
    for (int i = 0; i < d; ++i) {
      const Coordinate& c =
          vars[static_cast<std::size_t>(rng.next_int(
              0, static_cast<long>(vars.size()) - 1))];
      mono *= Expression::coordinate(c);
    }
    e += mono;
  }
  return e;
}

inline std::vector<Coordinate> point_vars(int m) {
  std::vector<Coordinate> vars{Coordinate::x(), Coordinate::y()};
  for (int a = 1; a <= m; ++a) vars.push_back(Coordinate::u(a));
  return vars;
}

/// Random system already in normal form (so the full pipeline applies):
/// u_xy + C u_x u_y + A u_x + B u_y + E = 0 with sparse low-degree
/// coefficients.
inline FGordonSystem random_normal_form_system(RationalSampler& rng, int m) {
  std::vector<Coordinate> vars = point_vars(m);
  ExprVec f(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    Expression rhs;
    for (int b = 1; b <= m; ++b) {
      for (int g = 1; g <= m; ++g)
        if (rng.next_int(0, 3) == 0)
          rhs -= random_poly(rng, vars, 1, 1) *
                 Expression::coordinate(Coordinate::ux(b)) *
                 Expression::coordinate(Coordinate::uy(g));
      if (rng.next_int(0, 2) == 0)
        rhs -= random_poly(rng, vars, 1, 1) *
               Expression::coordinate(Coordinate::ux(b));
      if (rng.next_int(0, 2) == 0)
        rhs -= random_poly(rng, vars, 1, 1) *
               Expression::coordinate(Coordinate::uy(b));
    }
    rhs -= random_poly(rng, vars, 2, 2);
    f[static_cast<std::size_t>(a - 1)] = rhs;
  }
  return make_system(m, std::move(f), default_names(m));
}

/// Random general first-order right-hand sides (not necessarily of normal
/// form): polynomial in all first-order coordinates.
inline FGordonSystem random_general_system(RationalSampler& rng, int m) {
  std::vector<Coordinate> vars = point_vars(m);
  for (int a = 1; a <= m; ++a) {
    vars.push_back(Coordinate::ux(a));
    vars.push_back(Coordinate::uy(a));
  }
  ExprVec f(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a)
    f[static_cast<std::size_t>(a)] = random_poly(rng, vars, 3, 4);
  return make_system(m, std::move(f), default_names(m));
}

/// The corpus systems (inputs only), for suites quantified over the corpus.
inline std::vector<FGordonSystem> corpus_systems() {
  std::vector<FGordonSystem> out;
  for (const auto& c : builtin_corpus()) {
    if (c.value("kind", "system") != "system") continue;
    if (c.at("expect").value("refusal", false)) continue;
    out.push_back(system_from_json(c.at("input")));
  }
  for (const auto& c : builtin_corpus()) {
    if (c.value("kind", "system") != "lie") continue;
    out.push_back(lie_system(structure_constants_from_json(c.at("input"))));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Property suites (criterion-level, >= 50 exact cases each)
// ---------------------------------------------------------------------------

/// Rank monotonicity along the stages and the stage cap m(m+1)/2.
inline std::vector<std::string> prop_rank_monotonic(std::uint64_t seed,
                                                    int cases = 50) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  for (int i = 0; i < cases; ++i) {
    int m = 1 + static_cast<int>(rng.next_int(0, 1));
    FGordonSystem sys = random_normal_form_system(rng, m);
    if (!check_normal_form(sys)) {
      failures.push_back("generator produced a non-normal-form system");
      continue;
    }
    const int n = unknown_count(m);
    InvariantTriple inv = invariants(sys);
    ConnectionForm w = connection_form(sys);
    PhiSystem phi = build_phi0(inv, m, sys.names);
    int prev = generic_rank(phi, seed + static_cast<std::uint64_t>(i)).rank;
    int stage = 0;
    for (int s = 1; s <= n + 1; ++s) {
      phi = augment(phi, w, sys.names);
      int r = generic_rank(phi, seed + static_cast<std::uint64_t>(i)).rank;
      if (r < prev) {
        std::ostringstream os;
        os << "case " << i << ": rank dropped from " << prev << " to " << r;
        failures.push_back(os.str());
        break;
      }
      stage = s;
      if (r == prev) break;
      prev = r;
    }
    if (stage > n) {
      std::ostringstream os;
      os << "case " << i << ": stabilization stage " << stage
         << " exceeds the bound " << n;
      failures.push_back(os.str());
    }
  }
  return failures;
}

/// S antisymmetry in the lower index pair, on general systems.
inline std::vector<std::string> prop_s_antisymmetry(std::uint64_t seed,
                                                    int cases = 50) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  for (int i = 0; i < cases; ++i) {
    int m = 1 + static_cast<int>(rng.next_int(0, 2));
    FGordonSystem sys = random_general_system(rng, m);
    InvariantTriple inv = invariants(sys);
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          if (!is_zero(inv.S[g][a][b] + inv.S[g][b][a]).zero) {
            std::ostringstream os;
            os << "case " << i << ": S antisymmetry fails at (" << g << ","
               << a << "," << b << ")";
            failures.push_back(os.str());
          }
  }
  return failures;
}

/// The Euler-Lagrange operator annihilates total divergences
/// D_x Q1 + D_y Q2 with Q_i(x,y,u).
inline std::vector<std::string> prop_euler_kills_divergences(
    std::uint64_t seed, int cases = 50) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  for (int i = 0; i < cases; ++i) {
    int m = 1 + static_cast<int>(rng.next_int(0, 1));
    std::vector<Coordinate> vars = point_vars(m);
    Expression q1 = random_poly(rng, vars, 3, 4);
    Expression q2 = random_poly(rng, vars, 3, 4);
    Expression L = total_derivative_free(q1, Direction::X, m) +
                   total_derivative_free(q2, Direction::Y, m);
    ExprVec E = euler_lagrange(Lagrangian::from_expression(L), m);
    for (const auto& e : E)
      if (!is_zero(e).zero) {
        std::ostringstream os;
        os << "case " << i << ": E(D_x Q1 + D_y Q2) != 0";
        failures.push_back(os.str());
        break;
      }
  }
  return failures;
}

/// Linearity of the Euler-Lagrange operator.
inline std::vector<std::string> prop_euler_linear(std::uint64_t seed,
                                                  int cases = 50) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  for (int i = 0; i < cases; ++i) {
    int m = 1 + static_cast<int>(rng.next_int(0, 1));
    std::vector<Coordinate> vars = point_vars(m);
    for (int a = 1; a <= m; ++a) {
      vars.push_back(Coordinate::ux(a));
      vars.push_back(Coordinate::uy(a));
    }
    Expression l1 = random_poly(rng, vars, 2, 4);
    Expression l2 = random_poly(rng, vars, 2, 4);
    Rational c1 = rng.next_small(5), c2 = rng.next_small(5);
    ExprVec ea = euler_lagrange(
        Lagrangian::from_expression(Expression::from_rational(c1) * l1 +
                                    Expression::from_rational(c2) * l2),
        m);
    ExprVec e1 = euler_lagrange(Lagrangian::from_expression(l1), m);
    ExprVec e2 = euler_lagrange(Lagrangian::from_expression(l2), m);
    for (int a = 0; a < m; ++a) {
      Expression diff = ea[static_cast<std::size_t>(a)] -
                        (Expression::from_rational(c1) *
                             e1[static_cast<std::size_t>(a)] +
                         Expression::from_rational(c2) *
                             e2[static_cast<std::size_t>(a)]);
      if (!is_zero(diff).zero) {
        std::ostringstream os;
        os << "case " << i << ": E is not linear";
        failures.push_back(os.str());
        break;
      }
    }
  }
  return failures;
}

/// Covariance of H, K, S under random affine fiber-preserving maps, across
/// the corpus systems.
inline std::vector<std::string> prop_covariance(std::uint64_t seed,
                                                int maps_per_system = 5) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  int total = 0;
  for (const auto& sys : corpus_systems()) {
    for (int i = 0; i < maps_per_system; ++i) {
      AffineFiberMap map;
      map.a1 = Rational(rng.next_int(1, 3), rng.next_int(1, 2));
      if (rng.next_int(0, 1)) map.a1 = -map.a1;
      map.b1 = Rational(rng.next_int(1, 3), rng.next_int(1, 2));
      map.a0 = rng.next_small(4);
      map.b0 = rng.next_small(4);
      const int m = sys.m;
      map.T.assign(static_cast<std::size_t>(m),
                   QVector(static_cast<std::size_t>(m), Rational(0)));
      while (true) {
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            map.T[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                Rational(rng.next_int(-2, 2));
        QMatrix probe = map.T;
        if (rank_bareiss(probe) == m) break;
      }
      ++total;
      if (!covariance_check(sys, map)) {
        std::ostringstream os;
        os << "covariance fails on a corpus system (map " << i << ")";
        failures.push_back(os.str());
      }
    }
  }
  if (total < 50)
    failures.push_back("fewer than 50 covariance cases were generated");
  return failures;
}

/// Oracle agreement: symbolic dimension == independent dense nullity on all
/// corpus systems.
inline std::vector<std::string> prop_oracle_agreement(std::uint64_t seed) {
  std::vector<std::string> failures;
  for (auto& sys : corpus_systems()) {
    FGordonSystem a = sys;
    FGordonSystem b = sys;
    MultiplierReport rep = stabilize(a, seed);
    int dense = oracle_dimension(b, seed + 1);
    if (rep.dimension != dense) {
      std::ostringstream os;
      os << "dimension " << rep.dimension << " vs dense nullity " << dense;
      failures.push_back(os.str());
    }
  }
  return failures;
}

/// Off-shell multiplier identity for every pair the pipeline constructs on
/// the corpus: reconstructed multipliers are fed to the Lagrangian
/// construction and the identity is re-checked.
inline std::vector<std::string> prop_offshell_constructed_pairs(
    std::uint64_t seed) {
  std::vector<std::string> failures;
  for (auto& sys : corpus_systems()) {
    if (!check_normal_form(sys)) continue;
    MultiplierReport rep = stabilize(sys, seed);
    if (!rep.closed_form) continue;
    for (const auto& M : rep.basis) {
      ConstructionResult cr = construct_lagrangian(M, sys, 4);
      if (!cr.ok) continue;  // a degenerate basis element may admit no L
      VerifyResult vr = verify_multiplier(cr.lagrangian, M, sys);
      if (!vr.ok)
        failures.push_back("a constructed pair fails the off-shell identity");
    }
  }
  return failures;
}

/// Linear combinations of reconstructed solutions satisfy the same
/// conditions (solution-space closure).
inline std::vector<std::string> prop_combination_closure(std::uint64_t seed) {
  std::vector<std::string> failures;
  RationalSampler rng(seed);
  for (auto& sys : corpus_systems()) {
    if (!check_normal_form(sys)) continue;
    MultiplierReport rep = stabilize(sys, seed);
    if (!rep.closed_form || rep.basis.size() < 2) continue;
    ConnectionForm w = connection_form(sys);
    const int m = sys.m;
    ExprMat comb = expr_matrix(m, m);
    for (const auto& M : rep.basis) {
      Expression c = Expression::from_rational(rng.next_small(7));
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) comb[a][b] += c * M[a][b];
    }
    for (const auto& r : rep.phi.rows) {
      Expression v;
      for (int u = 0; u < unknown_count(m); ++u) {
        auto [a, b] = unknown_pair(u, m);
        v += r.c[static_cast<std::size_t>(u)] * comb[a - 1][b - 1];
      }
      if (!is_zero(v).zero)
        failures.push_back("combination violates an algebraic row");
    }
    for (int a = 1; a <= m; ++a)
      for (int b = a; b <= m; ++b)
        for (int dir = 0; dir < 2 + m; ++dir) {
          Coordinate dc = dir == 0   ? Coordinate::x()
                          : dir == 1 ? Coordinate::y()
                                     : Coordinate::u(dir - 1);
          Expression v = comb[a - 1][b - 1].partial(dc);
          for (int s = 1; s <= m; ++s) {
            const Expression& oa = dir == 0   ? w.dx[s - 1][b - 1]
                                   : dir == 1 ? w.dy[s - 1][b - 1]
                                              : w.du[s - 1][b - 1][dir - 2];
            const Expression& ob = dir == 0   ? w.dx[s - 1][a - 1]
                                   : dir == 1 ? w.dy[s - 1][a - 1]
                                              : w.du[s - 1][a - 1][dir - 2];
            v -= comb[a - 1][s - 1] * oa + comb[b - 1][s - 1] * ob;
          }
          if (!is_zero(v).zero)
            failures.push_back("combination violates the differential condition");
        }
  }
  return failures;
}

}  // namespace fgordon::testing
