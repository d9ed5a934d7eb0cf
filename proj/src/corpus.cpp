#include "fgordon/corpus.hpp"

#include <sstream>

namespace fgordon {

const Json& builtin_corpus() {
  static const Json corpus = Json::parse(R"JSON([
{
  "name": "coupled_linear",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["v", "u"]},
  "expect": {
    "dimension": 2, "rank": 1, "stage_max": 3,
    "degeneracy": "nondegenerate combination found",
    "classify": {"label": "TWO_LAGRANGIANS", "subtype": "wave"},
    "lagrangians": [
      {"L": "-(u_x*u_y + v_x*v_y + 2*u*v)/2", "M": [["1", "0"], ["0", "1"]]},
      {"L": "-(2*u_x*v_y + u^2 + v^2)/2", "M": [["0", "1"], ["1", "0"]]}
    ]
  }
},
{
  "name": "coupled_linear_x",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["v", "x*u"]},
  "expect": {
    "dimension": 1, "rank": 2, "stage_max": 2,
    "degeneracy": "nondegenerate combination found",
    "classify": {"label": "AT_MOST_ONE"},
    "lagrangians": [
      {"L": "-u_x*v_y - (x*u^2 + v^2)/2", "M": [["0", "1"], ["1", "0"]]}
    ]
  }
},
{
  "name": "gradient_coupling",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["v", "u_x"]},
  "expect": {
    "dimension": 0, "rank": 3, "stage_max": 3,
    "classify": {"label": "AT_MOST_ONE"}
  }
},
{
  "name": "wave_m1",
  "kind": "system",
  "input": {"m": 1, "dependent": ["u"], "f": ["0"]},
  "expect": {"dimension": 1,
             "degeneracy": "nondegenerate combination found"}
},
{
  "name": "wave_m2",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["0", "0"]},
  "expect": {"dimension": 3,
             "degeneracy": "nondegenerate combination found",
             "classify": {"label": "THREE_LAGRANGIANS"}}
},
{
  "name": "wave_m3",
  "kind": "system",
  "input": {"m": 3, "dependent": ["u", "v", "w"], "f": ["0", "0", "0"]},
  "expect": {"dimension": 6,
             "degeneracy": "nondegenerate combination found"}
},
{
  "name": "three_lagrangians_xy",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["(x+y)*u", "(x+y)*v"]},
  "expect": {
    "dimension": 3,
    "classify": {"label": "THREE_LAGRANGIANS"},
    "lagrangians": [
      {"L": "u_x*u_y + (x+y)*u^2", "M": [["-2", "0"], ["0", "0"]]},
      {"L": "u_x*v_y + (x+y)*u*v", "M": [["0", "-1"], ["-1", "0"]]},
      {"L": "v_x*v_y + (x+y)*v^2", "M": [["0", "0"], ["0", "-2"]]}
    ]
  }
},
{
  "name": "harmonic_potential",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["-x*v", "x*u"]},
  "expect": {
    "dimension": 2,
    "classify": {"label": "TWO_LAGRANGIANS", "subtype": "harmonic"},
    "lagrangians": [
      {"L": "u_x*v_y + x*(u^2 - v^2)/2", "M": [["0", "-1"], ["-1", "0"]]},
      {"L": "u_x*u_y - v_x*v_y - 2*x*u*v", "M": [["-2", "0"], ["0", "2"]]}
    ]
  }
},
{
  "name": "wave_potential",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"],
            "f": ["(u+v)^2/2 - (u-v)^3/3", "(u+v)^2/2 + (u-v)^3/3"]},
  "expect": {
    "dimension": 2,
    "classify": {"label": "TWO_LAGRANGIANS", "subtype": "wave"},
    "lagrangians": [
      {"L": "u_x*u_y + v_x*v_y + (u+v)^3/3 - (u-v)^4/6",
       "M": [["-2", "0"], ["0", "-2"]]},
      {"L": "u_x*v_y + (u+v)^3/6 + (u-v)^4/12",
       "M": [["0", "-1"], ["-1", "0"]]}
    ]
  }
},
{
  "name": "degenerate_wvv_cubic",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"], "f": ["3*u^2", "6*u*v"]},
  "expect": {
    "dimension": 2,
    "classify": {"label": "TWO_LAGRANGIANS", "subtype": "degenerate-W_vv"},
    "lagrangians": [
      {"L": "u_x*u_y + 2*u^3", "M": [["-2", "0"], ["0", "0"]]},
      {"L": "u_x*v_y + 3*u^2*v", "M": [["0", "-1"], ["-1", "0"]]}
    ]
  }
},
{
  "name": "sphere_connection",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"],
            "f": ["(2*u*u_x*u_y + 2*v*(u_x*v_y + v_x*u_y) - 2*u*v_x*v_y)/(1 + u^2 + v^2)",
                   "(-2*v*u_x*u_y + 2*u*(u_x*v_y + v_x*u_y) + 2*v*v_x*v_y)/(1 + u^2 + v^2)"]},
  "expect": {"dimension": 1, "closed_form": false,
             "degeneracy": "nondegenerate combination found"}
},
{
  "name": "hyperbolic_metric",
  "kind": "system",
  "input": {"m": 2, "dependent": ["u", "v"],
            "f": ["exp(2*u)*v_x*v_y", "-(u_x*v_y + v_x*u_y)"]},
  "expect": {"dimension": 1, "closed_form": true,
             "degeneracy": "nondegenerate combination found"}
},
{
  "name": "scalar_sine",
  "kind": "system",
  "input": {"m": 1, "dependent": ["u"], "f": ["sin(u)"]},
  "expect": {
    "dimension": 1,
    "degeneracy": "nondegenerate combination found",
    "lagrangians": [
      {"L": "-u_x*u_y/2 + cos(u)", "M": [["1"]]}
    ]
  }
},
{
  "name": "scalar_nonvariational",
  "kind": "system",
  "input": {"m": 1, "dependent": ["u"], "f": ["u*u_x"]},
  "expect": {"dimension": 0}
},
{
  "name": "refusal_quadratic_gradient",
  "kind": "system",
  "input": {"m": 1, "dependent": ["u"], "f": ["u_x^2"]},
  "expect": {"refusal": true}
},
{
  "name": "so3",
  "kind": "lie",
  "input": {"m": 3, "brackets": [
    {"i": 1, "j": 2, "coeffs": ["0", "0", "1"]},
    {"i": 2, "j": 3, "coeffs": ["1", "0", "0"]},
    {"i": 3, "j": 1, "coeffs": ["0", "1", "0"]}]},
  "expect": {"biinvariant_dimension": 1, "pipeline_agrees": true,
             "degeneracy": "nondegenerate combination found",
             "killing_lagrangian_verifies": true}
},
{
  "name": "solvable4",
  "kind": "lie",
  "input": {"m": 4, "brackets": [
    {"i": 1, "j": 3, "coeffs": ["1", "0", "0", "0"]},
    {"i": 1, "j": 4, "coeffs": ["0", "1", "0", "0"]},
    {"i": 3, "j": 4, "coeffs": ["0", "0", "0", "1"]}]},
  "expect": {"biinvariant_dimension": 2, "pipeline_agrees": true,
             "degeneracy": "nondegenerate combination found",
             "lagrangian_with": [["0","0","0","-1"],["0","0","1","0"],
                                  ["0","1","0","0"],["-1","0","0","0"]]}
},
{
  "name": "nonabelian2",
  "kind": "lie",
  "input": {"m": 2, "brackets": [
    {"i": 1, "j": 2, "coeffs": ["1", "0"]}]},
  "expect": {"biinvariant_dimension": 1, "pipeline_agrees": true,
             "degeneracy": "all combinations degenerate"}
},
{
  "name": "abelian3",
  "kind": "lie",
  "input": {"m": 3, "brackets": []},
  "expect": {"biinvariant_dimension": 6, "pipeline_agrees": true,
             "degeneracy": "nondegenerate combination found"}
}
])JSON");
  return corpus;
}

namespace {

void check_eq(CorpusCaseResult& out, const std::string& what, const Json& got,
              const Json& want) {
  if (got != want) {
    out.pass = false;
    std::ostringstream os;
    os << what << ": expected " << want.dump() << ", got " << got.dump();
    out.failures.push_back(os.str());
  }
}

void run_system_case(const Json& c, std::uint64_t seed,
                     CorpusCaseResult& out) {
  FGordonSystem sys = system_from_json(c.at("input"));
  const Json& expect = c.at("expect");
  if (expect.value("refusal", false)) {
    if (check_normal_form(sys)) {
      out.pass = false;
      out.failures.push_back("expected a normal-form refusal");
    }
    return;
  }
  MultiplierReport rep = stabilize(sys, seed);
  if (expect.contains("dimension"))
    check_eq(out, "dimension", rep.dimension, expect.at("dimension"));
  if (expect.contains("rank"))
    check_eq(out, "rank", rep.rank, expect.at("rank"));
  if (expect.contains("stage_max") &&
      rep.stabilized_stage > expect.at("stage_max").get<int>()) {
    out.pass = false;
    out.failures.push_back("stabilized stage " +
                           std::to_string(rep.stabilized_stage) +
                           " exceeds the recorded bound");
  }
  if (expect.contains("closed_form"))
    check_eq(out, "closed_form", rep.closed_form, expect.at("closed_form"));
  if (expect.contains("degeneracy")) {
    Json rj = multiplier_report_to_json(rep, sys.names);
    check_eq(out, "degeneracy", rj.at("degeneracy"), expect.at("degeneracy"));
  }
  if (expect.contains("classify")) {
    ClassificationVerdict v = classify(sys, seed);
    const Json& ce = expect.at("classify");
    check_eq(out, "classify.label", Json(class_label_name(v.label)),
             ce.at("label"));
    if (ce.contains("subtype"))
      check_eq(out, "classify.subtype", Json(two_subtype_name(v.subtype)),
               ce.at("subtype"));
  }
  if (expect.contains("lagrangians")) {
    for (const auto& lm : expect.at("lagrangians")) {
      Lagrangian L = lagrangian_from_json(lm.at("L"), sys.names);
      ExprMat M = multiplier_from_json(lm.at("M"), sys.names);
      VerifyResult vr = verify_multiplier(L, M, sys);
      if (!vr.ok) {
        out.pass = false;
        out.failures.push_back("recorded Lagrangian failed verification: " +
                               lm.at("L").get<std::string>());
      }
    }
  }
}

void run_lie_case(const Json& c, std::uint64_t seed, CorpusCaseResult& out) {
  StructureConstants sc = structure_constants_from_json(c.at("input"));
  const Json& expect = c.at("expect");
  std::vector<QMatrix> basis = biinvariant_forms(sc);
  if (expect.contains("biinvariant_dimension"))
    check_eq(out, "biinvariant_dimension", static_cast<int>(basis.size()),
             expect.at("biinvariant_dimension"));
  FGordonSystem sys = lie_system(sc);
  MultiplierReport rep = stabilize(sys, seed);
  if (expect.contains("pipeline_agrees"))
    check_eq(out, "pipeline_agrees",
             rep.dimension == static_cast<int>(basis.size()),
             expect.at("pipeline_agrees"));
  if (expect.contains("degeneracy")) {
    Json rj = lie_report(sc, seed);
    check_eq(out, "degeneracy", rj.at("degeneracy"), expect.at("degeneracy"));
  }
  if (expect.value("killing_lagrangian_verifies", false)) {
    QMatrix killing = killing_form(sc);
    Lagrangian L = lie_lagrangian(killing, sc);
    ExprMat M = expr_matrix(sc.m, sc.m);
    for (int a = 0; a < sc.m; ++a)
      for (int b = 0; b < sc.m; ++b)
        M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            Expression::from_rational(killing[static_cast<std::size_t>(a)]
                                             [static_cast<std::size_t>(b)]);
    if (!verify_multiplier(L, M, sys).ok) {
      out.pass = false;
      out.failures.push_back("Killing-form Lagrangian failed verification");
    }
  }
  if (expect.contains("lagrangian_with")) {
    QMatrix M(static_cast<std::size_t>(sc.m),
              QVector(static_cast<std::size_t>(sc.m)));
    const Json& mj = expect.at("lagrangian_with");
    for (int a = 0; a < sc.m; ++a)
      for (int b = 0; b < sc.m; ++b)
        M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            rational_from_string(mj.at(static_cast<std::size_t>(a))
                                     .at(static_cast<std::size_t>(b))
                                     .get<std::string>());
    Lagrangian L = lie_lagrangian(M, sc);
    ExprMat ME = expr_matrix(sc.m, sc.m);
    for (int a = 0; a < sc.m; ++a)
      for (int b = 0; b < sc.m; ++b)
        ME[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            Expression::from_rational(M[static_cast<std::size_t>(a)]
                                       [static_cast<std::size_t>(b)]);
    if (!verify_multiplier(L, ME, sys).ok) {
      out.pass = false;
      out.failures.push_back("recorded bi-invariant Lagrangian failed");
    }
  }
}

}  // namespace

CorpusRunResult run_corpus(const Json& corpus, std::uint64_t seed) {
  if (!corpus.is_array())
    throw InputError("corpus document must be an array of cases");
  CorpusRunResult out;
  for (const auto& c : corpus) {
    CorpusCaseResult r;
    r.name = c.value("name", "(unnamed)");
    try {
      std::string kind = c.value("kind", "system");
      if (kind == "system")
        run_system_case(c, seed, r);
      else if (kind == "lie")
        run_lie_case(c, seed, r);
      else {
        r.pass = false;
        r.failures.push_back("unknown case kind: " + kind);
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    if (!r.pass) ++out.failed;
    out.cases.push_back(std::move(r));
  }
  return out;
}

std::string corpus_table(const CorpusRunResult& r) {
  std::ostringstream os;
  std::size_t width = 4;
  for (const auto& c : r.cases) width = std::max(width, c.name.size());
  for (const auto& c : r.cases) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name;
    os << std::string(width - c.name.size() + 2, ' ');
    if (!c.pass) {
      os << "(";
      for (std::size_t i = 0; i < c.failures.size(); ++i) {
        if (i) os << "; ";
        os << c.failures[i];
      }
      os << ")";
    }
    os << "\n";
  }
  os << r.cases.size() - static_cast<std::size_t>(r.failed) << "/"
     << r.cases.size() << " cases passed\n";
  return os.str();
}

}  // namespace fgordon
