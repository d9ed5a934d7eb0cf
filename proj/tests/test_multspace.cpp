#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgordon/multspace.hpp"
#include "properties.hpp"

using namespace fgordon;

namespace {

FGordonSystem sys2(const char* f1, const char* f2) {
  NameTable n = default_names(2);
  return make_system(2, {parse(f1, n), parse(f2, n)}, n);
}

}  // namespace

TEST_CASE("symmetric unknown enumeration") {
  CHECK(unknown_count(2) == 3);
  CHECK(unknown_count(3) == 6);
  CHECK(unknown_index(1, 1, 2) == 0);
  CHECK(unknown_index(1, 2, 2) == 1);
  CHECK(unknown_index(2, 1, 2) == 1);
  CHECK(unknown_index(2, 2, 2) == 2);
  for (int m = 1; m <= 4; ++m)
    for (int u = 0; u < unknown_count(m); ++u) {
      auto [a, b] = unknown_pair(u, m);
      CHECK(unknown_index(a, b, m) == u);
      CHECK(a <= b);
    }
  CHECK(unknown_name(1, 2) == "M12");
}

TEST_CASE("initial system of the linear coupled pair: M11 = M22") {
  FGordonSystem s = sys2("v", "u");
  PhiSystem phi = build_phi0(invariants(s), 2, s.names);
  REQUIRE(phi.rows.size() == 1);
  CHECK(phi.rows[0].c[0].is_one());
  CHECK(phi.rows[0].c[1].is_structural_zero());
  CHECK(phi.rows[0].c[2] == parse("-1", s.names));
}

TEST_CASE("initial system with the x coefficient: M11 = x M22") {
  FGordonSystem s = sys2("v", "x*u");
  PhiSystem phi = build_phi0(invariants(s), 2, s.names);
  REQUIRE(phi.rows.size() == 1);
  CHECK(phi.rows[0].c[0].is_one());
  CHECK(phi.rows[0].c[2] == parse("-x", s.names));
}

TEST_CASE("wave systems have no algebraic rows") {
  FGordonSystem s = sys2("0", "0");
  CHECK(build_phi0(invariants(s), 2, s.names).rows.empty());
}

TEST_CASE("augmentation differentiates and applies the connection") {
  SUBCASE("d/dx of M11 - x M22 yields M22") {
    FGordonSystem s = sys2("v", "x*u");
    ConnectionForm w = connection_form(s);
    PhiSystem phi = build_phi0(invariants(s), 2, s.names);
    PhiSystem next = augment(phi, w, s.names);
    REQUIRE(next.rows.size() == 2);
    CHECK(next.rows[1].c[2].is_one());
    CHECK(next.rows[1].c[0].is_structural_zero());
    CHECK(next.rows[1].stage == 1);
  }
  SUBCASE("gradient coupling: M11 = 0 propagates to M12 = 0") {
    FGordonSystem s = sys2("v", "u_x");
    ConnectionForm w = connection_form(s);
    PhiSystem phi = build_phi0(invariants(s), 2, s.names);
    REQUIRE(phi.rows.size() == 1);
    CHECK(phi.rows[0].c[0].is_one());  // M11 = 0
    PhiSystem next = augment(phi, w, s.names);
    REQUIRE(next.rows.size() == 2);
    CHECK(next.rows[1].c[1].is_one());  // M12 = 0
  }
  SUBCASE("constant rows with a vanishing connection add nothing") {
    FGordonSystem s = sys2("v", "u");
    ConnectionForm w = connection_form(s);
    PhiSystem phi = build_phi0(invariants(s), 2, s.names);
    PhiSystem next = augment(phi, w, s.names);
    CHECK(next.rows.size() == phi.rows.size());
  }
}

TEST_CASE("generic rank by exact sampling") {
  FGordonSystem s = sys2("v", "u");
  PhiSystem phi = build_phi0(invariants(s), 2, s.names);
  RankResult r = generic_rank(phi, kDefaultSeed);
  CHECK(r.rank == 1);
  CHECK_FALSE(r.stratified);
  for (const auto& pr : r.points) CHECK(pr.rank == 1);

  PhiSystem empty;
  empty.m = 2;
  CHECK(generic_rank(empty, kDefaultSeed).rank == 0);
}

TEST_CASE("stabilization on the three reference systems") {
  SUBCASE("dimension two with constant basis") {
    FGordonSystem s = sys2("v", "u");
    MultiplierReport rep = stabilize(s, kDefaultSeed);
    CHECK(rep.dimension == 2);
    CHECK(rep.rank == 1);
    CHECK(rep.stabilized_stage <= 3);
    CHECK(rep.closed_form);
    REQUIRE(rep.basis.size() == 2);
  }
  SUBCASE("dimension one, stage two") {
    FGordonSystem s = sys2("v", "x*u");
    MultiplierReport rep = stabilize(s, kDefaultSeed);
    CHECK(rep.dimension == 1);
    CHECK(rep.rank == 2);
    CHECK(rep.stabilized_stage == 2);
    REQUIRE(rep.basis.size() == 1);
    CHECK(rep.basis[0][0][0].is_structural_zero());
    CHECK(rep.basis[0][0][1].is_one());
    CHECK(rep.basis[0][1][1].is_structural_zero());
  }
  SUBCASE("dimension zero through the three-step chain") {
    FGordonSystem s = sys2("v", "u_x");
    MultiplierReport rep = stabilize(s, kDefaultSeed);
    CHECK(rep.dimension == 0);
    CHECK(rep.rank == 3);
    CHECK(rep.stabilized_stage <= 3);
    CHECK(rep.degeneracy.verdict == DegeneracyVerdict::AllDegenerate);
  }
}

TEST_CASE("stabilize requires the normal form") {
  NameTable n1 = default_names(1);
  FGordonSystem s = make_system(1, {parse("u_x^2", n1)}, n1);
  CHECK_THROWS_AS(stabilize(s, kDefaultSeed), std::invalid_argument);
}

TEST_CASE("reconstruction finds the opaque-atom closed form") {
  NameTable n = default_names(2);
  FGordonSystem s = make_system(
      2, {parse("exp(2*u)*v_x*v_y", n), parse("-(u_x*v_y + v_x*u_y)", n)}, n);
  MultiplierReport rep = stabilize(s, kDefaultSeed);
  CHECK(rep.dimension == 1);
  REQUIRE(rep.closed_form);
  const ExprMat& M = rep.basis[0];
  // proportional to diag(1, exp(2u))
  Expression ratio = M[1][1] - parse("exp(2*u)", n) * M[0][0];
  CHECK(is_zero(ratio).zero);
  CHECK(is_zero(M[0][1]).zero);
}

TEST_CASE("rational coefficients without polynomial solutions degrade honestly") {
  NameTable n = default_names(2);
  FGordonSystem s = make_system(
      2,
      {parse("(2*u*u_x*u_y + 2*v*(u_x*v_y + v_x*u_y) - 2*u*v_x*v_y)"
             "/(1 + u^2 + v^2)",
             n),
       parse("(-2*v*u_x*u_y + 2*u*(u_x*v_y + v_x*u_y) + 2*v*v_x*v_y)"
             "/(1 + u^2 + v^2)",
             n)},
      n);
  MultiplierReport rep = stabilize(s, kDefaultSeed);
  CHECK(rep.dimension == 1);
  CHECK_FALSE(rep.closed_form);
  REQUIRE(!rep.warnings.empty());
  bool found = false;
  for (const auto& w : rep.warnings)
    if (w.find("closed form not found") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("degeneracy probe") {
  NameTable n = default_names(2);
  SUBCASE("single off-diagonal generator is nondegenerate") {
    ExprMat M = expr_matrix(2, 2);
    M[0][1] = Expression::from_int(1);
    M[1][0] = Expression::from_int(1);
    DegeneracyResult d = degeneracy_probe({M}, 2, kDefaultSeed);
    CHECK(d.verdict == DegeneracyVerdict::NondegenerateFound);
    NameTable pn = n;
    pn.parameters = {"c1"};
    CHECK(is_zero(d.det + parse("c1^2", pn)).zero);  // det = -c1^2
  }
  SUBCASE("rank-one generator is degenerate for every combination") {
    ExprMat M = expr_matrix(2, 2);
    M[0][0] = Expression::from_int(1);
    DegeneracyResult d = degeneracy_probe({M}, 2, kDefaultSeed);
    CHECK(d.verdict == DegeneracyVerdict::AllDegenerate);
  }
  SUBCASE("the two-parameter family of the linear pair") {
    FGordonSystem s = sys2("v", "u");
    MultiplierReport rep = stabilize(s, kDefaultSeed);
    REQUIRE(rep.dimension == 2);
    CHECK(rep.degeneracy.verdict == DegeneracyVerdict::NondegenerateFound);
    // det(c1 offdiag + c2 I) = c2^2 - c1^2
    NameTable pn = n;
    pn.parameters = {"c1", "c2"};
    CHECK(is_zero(rep.degeneracy.det - parse("c2^2 - c1^2", pn)).zero);
  }
}

TEST_CASE("fuzz: rank monotonicity and the stage cap") {
  auto failures = fgordon::testing::prop_rank_monotonic(2024, 50);
  for (const auto& f : failures) FAIL_CHECK(f);
  CHECK(failures.empty());
}

TEST_CASE("oracle agreement across the corpus") {
  auto failures = fgordon::testing::prop_oracle_agreement(kDefaultSeed);
  for (const auto& f : failures) FAIL_CHECK(f);
  CHECK(failures.empty());
}

TEST_CASE("combination closure of reconstructed solutions") {
  auto failures = fgordon::testing::prop_combination_closure(kDefaultSeed);
  for (const auto& f : failures) FAIL_CHECK(f);
  CHECK(failures.empty());
}
