#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgordon/classify2d.hpp"
#include "properties.hpp"

using namespace fgordon;

namespace {

FGordonSystem sys2(const char* f1, const char* f2) {
  NameTable n = default_names(2);
  return make_system(2, {parse(f1, n), parse(f2, n)}, n);
}

int rank_at_points(const ExprMat& rows, std::uint64_t seed) {
  // evaluate and eliminate over a handful of points
  RationalSampler rng(seed);
  int best = 0;
  for (int t = 0; t < 5; ++t) {
    Point p;
    std::set<int> keys;
    for (const auto& r : rows)
      for (const auto& e : r)
        for (int k : e.coordinate_keys()) keys.insert(k);
    for (int k : keys) p.coords[k] = rng.next();
    QMatrix m;
    for (const auto& r : rows) {
      QVector q;
      for (const auto& e : r) q.push_back(e.evaluate(p).value);
      m.push_back(std::move(q));
    }
    best = std::max(best, rank_bareiss(m));
  }
  return best;
}

}  // namespace

TEST_CASE("the 4x3 condition matrix") {
  SUBCASE("rank one for the linear pair") {
    FGordonSystem s = sys2("v", "u");
    ExprMat A = build_A(invariants(s), 2);
    CHECK(rank_at_points(A, 5) == 1);
  }
  SUBCASE("rank zero for proportional diagonal systems") {
    FGordonSystem s = sys2("(x*y)*u", "(x*y)*v");
    ExprMat A = build_A(invariants(s), 2);
    for (const auto& row : A)
      for (const auto& e : row) CHECK(is_zero(e).zero);
  }
  SUBCASE("stage-zero matrix for the gradient-coupled system") {
    FGordonSystem s = sys2("v", "u_x");
    ExprMat A = build_A(invariants(s), 2);
    CHECK(rank_at_points(A, 5) == 1);
  }
  SUBCASE("m must be two") {
    NameTable n1 = default_names(1);
    FGordonSystem s = make_system(1, {parse("0", n1)}, n1);
    CHECK_THROWS_AS(build_A(invariants(s), 1), std::invalid_argument);
  }
}

TEST_CASE("the S-trace test") {
  SUBCASE("symmetric quadratic coefficients pass") {
    FGordonSystem s = sys2("-u*u_x*u_y", "0");
    CHECK(trace_obstruction_clear(invariants(s), 2));
  }
  SUBCASE("asymmetric quadratic coefficients obstruct") {
    // C^1_{12} = 1, C^1_{21} = 0
    FGordonSystem s = sys2("-u_x*v_y", "0");
    CHECK_FALSE(trace_obstruction_clear(invariants(s), 2));
  }
  SUBCASE("nonabelian structure constants obstruct") {
    FGordonSystem s = sys2("-(u_x*v_y - v_x*u_y)", "0");
    CHECK_FALSE(trace_obstruction_clear(invariants(s), 2));
  }
}

TEST_CASE("classification dispatch") {
  SUBCASE("proportional diagonal: three Lagrangians") {
    FGordonSystem s = sys2("(x+y)*u", "(x+y)*v");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::ThreeLagrangians);
    CHECK(v.multspace_dimension == 3);
    REQUIRE(v.lambda);
    CHECK(*v.lambda == parse("x + y", s.names));
  }
  SUBCASE("harmonic potential") {
    FGordonSystem s = sys2("-x*v", "x*u");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::TwoLagrangians);
    CHECK(v.subtype == TwoSubtype::Harmonic);
    CHECK(v.multspace_dimension == 2);
    REQUIRE(v.indefinite_witness);
  }
  SUBCASE("wave potential") {
    FGordonSystem s = sys2("(u+v)^2/2 - (u-v)^3/3", "(u+v)^2/2 + (u-v)^3/3");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::TwoLagrangians);
    CHECK(v.subtype == TwoSubtype::Wave);
  }
  SUBCASE("vanishing W_vv branch") {
    FGordonSystem s = sys2("3*u^2", "6*u*v");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::TwoLagrangians);
    CHECK(v.subtype == TwoSubtype::DegenerateWvv);
  }
  SUBCASE("H different from K caps the count") {
    FGordonSystem s = sys2("v", "x*u");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::AtMostOne);
    CHECK(v.multspace_dimension == 1);
  }
  SUBCASE("reducible gradient system") {
    FGordonSystem s = sys2("v", "u_x");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::AtMostOne);
    CHECK(v.reducible_not_constructed);
    CHECK(v.multspace_dimension == 0);
  }
  SUBCASE("S obstruction") {
    FGordonSystem s = sys2("-(u_x*v_y - v_x*u_y)", "0");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::STraceObstructed);
  }
  SUBCASE("refusal") {
    FGordonSystem s = sys2("u_x^2", "0");
    ClassificationVerdict v = classify(s, kDefaultSeed);
    CHECK(v.label == ClassLabel::NotNormalForm);
  }
  SUBCASE("m must be two") {
    NameTable n1 = default_names(1);
    FGordonSystem s = make_system(1, {parse("0", n1)}, n1);
    CHECK_THROWS_AS(classify(s, kDefaultSeed), std::invalid_argument);
  }
}

TEST_CASE("verdict consistency with the stabilized dimension") {
  // The Lagrangian count never exceeds the multiplier-space dimension and
  // matches it whenever the label pins a count.
  for (const char* pair : {"v|u", "v|x*u", "v|u_x", "0|0", "-x*v|x*u",
                           "3*u^2|6*u*v", "(x+y)*u|(x+y)*v"}) {
    std::string s(pair);
    auto bar = s.find('|');
    FGordonSystem sys = sys2(s.substr(0, bar).c_str(),
                             s.substr(bar + 1).c_str());
    ClassificationVerdict v = classify(sys, kDefaultSeed);
    switch (v.label) {
      case ClassLabel::ThreeLagrangians:
        CHECK(v.multspace_dimension == 3);
        break;
      case ClassLabel::TwoLagrangians:
        CHECK(v.multspace_dimension == 2);
        break;
      case ClassLabel::AtMostOne:
        CHECK(v.multspace_dimension <= 1);
        break;
      case ClassLabel::NotNormalForm:
        CHECK(v.multspace_dimension == 0);
        break;
      case ClassLabel::STraceObstructed:
        break;  // degenerate solutions may still span a space
    }
  }
}

TEST_CASE("covariance under explicit maps") {
  SUBCASE("identity map") {
    FGordonSystem s = sys2("v", "x*u");
    AffineFiberMap mp;
    mp.T = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    CHECK(covariance_check(s, mp));
  }
  SUBCASE("dependent-variable swap") {
    FGordonSystem s = sys2("v", "u");
    AffineFiberMap mp;
    mp.T = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    CHECK(covariance_check(s, mp));
  }
  SUBCASE("base rescaling with the 1/(A'B') factor") {
    FGordonSystem s = sys2("v", "x*u");
    AffineFiberMap mp;
    mp.a1 = 2;
    mp.T = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    CHECK(covariance_check(s, mp));
  }
  SUBCASE("degenerate maps are rejected") {
    FGordonSystem s = sys2("v", "u");
    AffineFiberMap mp;
    mp.a1 = 0;
    mp.T = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    CHECK_THROWS_AS(covariance_check(s, mp), std::invalid_argument);
    AffineFiberMap mp2;
    mp2.T = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
    CHECK_THROWS_AS(covariance_check(s, mp2), std::invalid_argument);
  }
}

TEST_CASE("fuzz: covariance across the corpus") {
  auto failures = fgordon::testing::prop_covariance(31337, 5);
  for (const auto& f : failures) FAIL_CHECK(f);
  CHECK(failures.empty());
}
