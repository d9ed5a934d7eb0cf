#include "fgordon/io.hpp"

#include <sstream>

namespace fgordon {

namespace {

std::string expr_field(const Json& v, const char* what) {
  if (!v.is_string()) throw InputError(std::string(what) + " must be a string");
  return v.get<std::string>();
}

Expression parse_field(const Json& v, const NameTable& names,
                       const char* what) {
  try {
    return parse(expr_field(v, what), names);
  } catch (const ParseError& e) {
    std::ostringstream os;
    os << what << ": " << e.what() << " at position " << e.position;
    throw InputError(os.str());
  }
}

const char* certainty_name(Certainty c) {
  switch (c) {
    case Certainty::Exact:
      return "exact";
    case Certainty::Probabilistic:
      return "probabilistic";
    case Certainty::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

const char* degeneracy_name(DegeneracyVerdict d) {
  switch (d) {
    case DegeneracyVerdict::NondegenerateFound:
      return "nondegenerate combination found";
    case DegeneracyVerdict::AllDegenerate:
      return "all combinations degenerate";
    case DegeneracyVerdict::Undetermined:
      return "undetermined";
  }
  return "?";
}

Json matrix_to_json(const ExprMat& m, const NameTable& names) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json jr = Json::array();
    for (const auto& e : row) jr.push_back(to_string(e, names));
    out.push_back(std::move(jr));
  }
  return out;
}

Json qmatrix_to_json(const QMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json jr = Json::array();
    for (const auto& v : row) jr.push_back(to_string(v));
    out.push_back(std::move(jr));
  }
  return out;
}

Json point_to_json(const Point& p, const NameTable& names) {
  Json out = Json::object();
  for (const auto& [key, v] : p.coords)
    out[names.coordinate_name(coord_from_key(key))] = to_string(v);
  for (const auto& [i, v] : p.params)
    out[names.parameter_name(i)] = to_string(v);
  if (!p.functions.empty()) {
    Json fs = Json::object();
    for (const auto& [kind, arg, v] : p.functions)
      fs[std::string(func_name(kind)) + "(" + to_string(arg, names) + ")"] =
          to_string(v);
    out["opaque_atoms"] = std::move(fs);
  }
  return out;
}

// Linear combination of the symmetric unknowns as a readable string.
std::string linear_in_unknowns(const std::vector<Expression>& coeff, int m,
                               const NameTable& names) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t u = 0; u < coeff.size(); ++u) {
    if (coeff[u].is_structural_zero()) continue;
    std::string c = to_string(coeff[u], names);
    if (any) os << " + ";
    os << "(" << c << ")*" << unknown_name(static_cast<int>(u), m);
    any = true;
  }
  return any ? os.str() : "0";
}

Rational rational_field(const Json& v, const char* what) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return rational_from_string(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
  throw InputError(std::string(what) + " must be an integer or a string");
}

}  // namespace

FGordonSystem system_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("system document must be an object");
  if (!doc.contains("m")) throw InputError("system document needs \"m\"");
  int m = 0;
  try {
    m = doc.at("m").get<int>();
  } catch (...) {
    throw InputError("\"m\" must be an integer");
  }
  if (m < 1) throw InputError("\"m\" must be positive");
  NameTable names = default_names(m);
  if (doc.contains("dependent")) {
    names.dependent.clear();
    for (const auto& v : doc.at("dependent"))
      names.dependent.push_back(expr_field(v, "dependent name"));
  }
  if (doc.contains("parameters")) {
    for (const auto& v : doc.at("parameters"))
      names.parameters.push_back(expr_field(v, "parameter name"));
  }
  try {
    names.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (static_cast<int>(names.dependent.size()) != m)
    throw InputError("\"dependent\" must list exactly m names");
  if (!doc.contains("f") || !doc.at("f").is_array() ||
      doc.at("f").size() != static_cast<std::size_t>(m))
    throw InputError("\"f\" must list exactly m expressions");
  ExprVec f;
  for (const auto& v : doc.at("f"))
    f.push_back(parse_field(v, names, "right-hand side"));
  FGordonSystem sys;
  try {
    sys = make_system(m, std::move(f), names);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (doc.contains("normal_form")) {
    const Json& nfj = doc.at("normal_form");
    NormalForm nf;
    nf.C = expr_tensor3(m, m, m);
    nf.A = expr_matrix(m, m);
    nf.B = expr_matrix(m, m);
    nf.E.resize(static_cast<std::size_t>(m));
    try {
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          for (int g = 0; g < m; ++g)
            nf.C[a][b][g] = parse_field(
                nfj.at("C").at(a).at(b).at(g), names, "normal_form.C");
          nf.A[a][b] =
              parse_field(nfj.at("A").at(a).at(b), names, "normal_form.A");
          nf.B[a][b] =
              parse_field(nfj.at("B").at(a).at(b), names, "normal_form.B");
        }
        nf.E[static_cast<std::size_t>(a)] =
            parse_field(nfj.at("E").at(a), names, "normal_form.E");
      }
    } catch (const Json::exception& e) {
      throw InputError(std::string("normal_form override malformed: ") +
                       e.what());
    }
    // The override must reassemble the stated right-hand sides exactly.
    for (int a = 1; a <= m; ++a) {
      Expression back = nf.E[static_cast<std::size_t>(a - 1)];
      for (int b = 1; b <= m; ++b) {
        back += nf.A[a - 1][b - 1] * Expression::coordinate(Coordinate::ux(b));
        back += nf.B[a - 1][b - 1] * Expression::coordinate(Coordinate::uy(b));
        for (int g = 1; g <= m; ++g)
          back += nf.C[a - 1][b - 1][g - 1] *
                  Expression::coordinate(Coordinate::ux(b)) *
                  Expression::coordinate(Coordinate::uy(g));
      }
      if (!is_zero(sys.rhs(a) + back).zero)
        throw InputError(
            "normal_form override does not reproduce the right-hand sides");
    }
    sys.normal_form = std::move(nf);
  }
  return sys;
}

Json system_to_json(const FGordonSystem& sys) {
  Json out;
  out["m"] = sys.m;
  out["dependent"] = sys.names.dependent;
  if (!sys.names.parameters.empty()) out["parameters"] = sys.names.parameters;
  Json f = Json::array();
  for (const auto& e : sys.f) f.push_back(to_string(e, sys.names));
  out["f"] = std::move(f);
  return out;
}

Lagrangian lagrangian_from_json(const Json& doc, const NameTable& names) {
  if (doc.is_string())
    return Lagrangian::from_expression(parse_field(doc, names, "Lagrangian"));
  if (!doc.is_object())
    throw InputError("Lagrangian document must be a string or an object");
  if (doc.contains("L"))
    return Lagrangian::from_expression(
        parse_field(doc.at("L"), names, "Lagrangian"));
  const int m = names.m();
  StructuredLagrangian s;
  s.R = expr_matrix(m, m);
  try {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        s.R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            parse_field(doc.at("R").at(a).at(b), names, "Lagrangian.R");
    for (int a = 0; a < m; ++a) {
      s.Q.push_back(parse_field(doc.at("Q").at(a), names, "Lagrangian.Q"));
      s.P.push_back(parse_field(doc.at("P").at(a), names, "Lagrangian.P"));
    }
    s.N = parse_field(doc.at("N"), names, "Lagrangian.N");
  } catch (const Json::exception& e) {
    throw InputError(std::string("Lagrangian document malformed: ") + e.what());
  }
  try {
    return Lagrangian::from_structured(std::move(s));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Json lagrangian_to_json(const Lagrangian& lag, const NameTable& names,
                        int m) {
  Json out;
  out["L"] = to_string(lag.expand(m), names);
  if (lag.structured) {
    out["R"] = matrix_to_json(lag.structured->R, names);
    Json q = Json::array(), p = Json::array();
    for (const auto& e : lag.structured->Q) q.push_back(to_string(e, names));
    for (const auto& e : lag.structured->P) p.push_back(to_string(e, names));
    out["Q"] = std::move(q);
    out["P"] = std::move(p);
    out["N"] = to_string(lag.structured->N, names);
  }
  return out;
}

ExprMat multiplier_from_json(const Json& doc, const NameTable& names) {
  const Json* mj = &doc;
  if (doc.is_object() && doc.contains("M")) mj = &doc.at("M");
  if (!mj->is_array()) throw InputError("multiplier must be a matrix");
  const int m = names.m();
  if (static_cast<int>(mj->size()) != m)
    throw InputError("multiplier must be an m x m matrix");
  ExprMat M = expr_matrix(m, m);
  for (int a = 0; a < m; ++a) {
    const Json& row = mj->at(static_cast<std::size_t>(a));
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw InputError("multiplier must be an m x m matrix");
    for (int b = 0; b < m; ++b)
      M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          parse_field(row.at(static_cast<std::size_t>(b)), names, "multiplier");
  }
  return M;
}

StructureConstants structure_constants_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("m"))
    throw InputError("structure-constant document needs \"m\"");
  int m = 0;
  try {
    m = doc.at("m").get<int>();
  } catch (...) {
    throw InputError("\"m\" must be an integer");
  }
  if (m < 1) throw InputError("\"m\" must be positive");
  std::vector<std::vector<QVector>> c(
      static_cast<std::size_t>(m),
      std::vector<QVector>(static_cast<std::size_t>(m),
                           QVector(static_cast<std::size_t>(m), Rational(0))));
  if (doc.contains("brackets")) {
    for (const auto& br : doc.at("brackets")) {
      int i = 0, j = 0;
      try {
        i = br.at("i").get<int>();
        j = br.at("j").get<int>();
      } catch (...) {
        throw InputError("bracket entries need integer \"i\" and \"j\"");
      }
      if (i < 1 || i > m || j < 1 || j > m || i == j)
        throw InputError("bracket indices out of range");
      const Json& coeffs = br.at("coeffs");
      if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != m)
        throw InputError("bracket \"coeffs\" must have m entries");
      for (int a = 0; a < m; ++a)
        c[static_cast<std::size_t>(a)][static_cast<std::size_t>(i - 1)]
         [static_cast<std::size_t>(j - 1)] =
             rational_field(coeffs.at(static_cast<std::size_t>(a)),
                            "bracket coefficient");
    }
  }
  try {
    return make_structure_constants(m, std::move(c), true);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Json invariants_report(FGordonSystem& sys) {
  Json out;
  out["m"] = sys.m;
  out["system"] = system_to_json(sys);
  InvariantTriple inv = invariants(sys);
  out["H"] = matrix_to_json(inv.H, sys.names);
  out["K"] = matrix_to_json(inv.K, sys.names);
  Json s3 = Json::array();
  for (const auto& plane : inv.S) s3.push_back(matrix_to_json(plane, sys.names));
  out["S"] = std::move(s3);
  auto nf = check_normal_form(sys);
  if (!nf) {
    out["normal_form"] = nullptr;
    out["verdict"] =
        "no first-order variational multiplier exists (the second-derivative "
        "conditions fail)";
    return out;
  }
  Json nfj;
  Json c3 = Json::array();
  for (const auto& plane : nf->C) c3.push_back(matrix_to_json(plane, sys.names));
  nfj["C"] = std::move(c3);
  nfj["A"] = matrix_to_json(nf->A, sys.names);
  nfj["B"] = matrix_to_json(nf->B, sys.names);
  Json ej = Json::array();
  for (const auto& e : nf->E) ej.push_back(to_string(e, sys.names));
  nfj["E"] = std::move(ej);
  out["normal_form"] = std::move(nfj);

  // Algebraic rows and the differential condition, spelled out on the
  // symmetric unknowns.
  PhiSystem phi = build_phi0(inv, sys.m, sys.names);
  Json rows = Json::array();
  for (const auto& r : phi.rows) {
    Json jr;
    jr["origin"] = r.origin;
    jr["row"] = linear_in_unknowns(r.c, sys.m, sys.names) + " = 0";
    rows.push_back(std::move(jr));
  }
  out["algebraic_conditions"] = std::move(rows);
  ConnectionForm w = connection_form(sys);
  Json dm = Json::object();
  for (int a = 1; a <= sys.m; ++a)
    for (int b = a; b <= sys.m; ++b) {
      Json comp = Json::object();
      for (int dir = 0; dir < 2 + sys.m; ++dir) {
        Coordinate dc = dir == 0   ? Coordinate::x()
                        : dir == 1 ? Coordinate::y()
                                   : Coordinate::u(dir - 1);
        std::vector<Expression> coeff(
            static_cast<std::size_t>(unknown_count(sys.m)));
        for (int s = 1; s <= sys.m; ++s) {
          const Expression& oa = dir == 0   ? w.dx[s - 1][b - 1]
                                 : dir == 1 ? w.dy[s - 1][b - 1]
                                            : w.du[s - 1][b - 1][dir - 2];
          const Expression& ob = dir == 0   ? w.dx[s - 1][a - 1]
                                 : dir == 1 ? w.dy[s - 1][a - 1]
                                            : w.du[s - 1][a - 1][dir - 2];
          coeff[static_cast<std::size_t>(unknown_index(a, s, sys.m))] += oa;
          coeff[static_cast<std::size_t>(unknown_index(b, s, sys.m))] += ob;
        }
        comp["d" + sys.names.coordinate_name(dc)] =
            linear_in_unknowns(coeff, sys.m, sys.names);
      }
      dm["dM" + std::to_string(a) + std::to_string(b)] = std::move(comp);
    }
  out["differential_condition"] = std::move(dm);
  return out;
}

Json multiplier_report_to_json(const MultiplierReport& rep,
                               const NameTable& names) {
  Json out;
  out["m"] = rep.m;
  out["dimension"] = rep.dimension;
  out["rank"] = rep.rank;
  out["stage"] = rep.stabilized_stage;
  out["seed"] = rep.seed;
  out["degree_cap"] = rep.degree_cap;
  out["closed_form"] = rep.closed_form;
  Json basis = Json::array();
  for (const auto& M : rep.basis) basis.push_back(matrix_to_json(M, names));
  out["basis"] = std::move(basis);
  Json pw = Json::array();
  for (const auto& M : rep.pointwise_basis) pw.push_back(qmatrix_to_json(M));
  out["pointwise_basis"] = std::move(pw);
  out["degeneracy"] = degeneracy_name(rep.degeneracy.verdict);
  if (rep.degeneracy.verdict == DegeneracyVerdict::NondegenerateFound) {
    Json w = Json::array();
    for (const auto& v : rep.degeneracy.witness) w.push_back(to_string(v));
    out["witness"] = std::move(w);
  }
  if (rep.dimension > 0) {
    NameTable pn = names;
    pn.parameters.clear();
    for (int i = 1; i <= rep.dimension; ++i)
      pn.parameters.push_back("c" + std::to_string(i));
    out["det_of_combination"] = to_string(rep.degeneracy.det, pn);
  }
  out["warnings"] = rep.warnings;
  Json pts = Json::array();
  for (const auto& pr : rep.sample_points) {
    Json jp = point_to_json(pr.point, names);
    jp["rank"] = pr.rank;
    pts.push_back(std::move(jp));
  }
  out["sample_points"] = std::move(pts);
  out["base_point"] = point_to_json(rep.base_point, names);
  Json rows = Json::array();
  for (const auto& r : rep.phi.rows) {
    Json jr;
    jr["stage"] = r.stage;
    jr["origin"] = r.origin;
    jr["row"] = linear_in_unknowns(r.c, rep.m, names) + " = 0";
    rows.push_back(std::move(jr));
  }
  out["rows"] = std::move(rows);
  return out;
}

Json classification_to_json(const ClassificationVerdict& v,
                            const NameTable& names, std::uint64_t seed) {
  Json out;
  out["label"] = class_label_name(v.label);
  if (v.label == ClassLabel::TwoLagrangians)
    out["subtype"] = two_subtype_name(v.subtype);
  if (v.rank_A >= 0) out["rank_A"] = v.rank_A;
  if (!v.h_minus_k.empty())
    out["H_minus_K"] = matrix_to_json(v.h_minus_k, names);
  if (v.lambda) out["lambda"] = to_string(*v.lambda, names);
  out["multspace_dimension"] = v.multspace_dimension;
  out["reducible_not_constructed"] = v.reducible_not_constructed;
  if (v.indefinite_witness) {
    Json w = Json::array();
    for (const auto& c : *v.indefinite_witness) w.push_back(to_string(c));
    out["indefinite_witness"] = std::move(w);
  }
  out["notes"] = v.notes;
  out["seed"] = seed;
  return out;
}

Json verify_report(const VerifyResult& vr, const NameTable& names) {
  Json out;
  out["ok"] = vr.ok;
  out["certainty"] = certainty_name(vr.certainty);
  if (!vr.ok) {
    Json res = Json::array();
    for (const auto& r : vr.residuals) res.push_back(to_string(r, names));
    out["residuals"] = std::move(res);
  }
  return out;
}

Json construction_report(const ConstructionResult& cr, const NameTable& names,
                         int m) {
  Json out;
  out["ok"] = cr.ok;
  out["message"] = cr.message;
  if (cr.ok) out["lagrangian"] = lagrangian_to_json(cr.lagrangian, names, m);
  out["degree_cap"] = cr.degree_cap;
  return out;
}

Json lie_report(const StructureConstants& sc, std::uint64_t seed) {
  Json out;
  out["m"] = sc.m;
  QMatrix killing = killing_form(sc);
  out["killing_form"] = qmatrix_to_json(killing);
  std::vector<QMatrix> basis = biinvariant_forms(sc);
  out["biinvariant_dimension"] = static_cast<int>(basis.size());
  Json bj = Json::array();
  for (const auto& M : basis) bj.push_back(qmatrix_to_json(M));
  out["biinvariant_basis"] = std::move(bj);
  out["killing_is_biinvariant"] = is_biinvariant(killing, sc);

  FGordonSystem sys = lie_system(sc);
  out["system"] = system_to_json(sys);
  MultiplierReport rep = stabilize(sys, seed);
  out["multspace_dimension"] = rep.dimension;
  out["pipeline_agrees"] =
      rep.dimension == static_cast<int>(basis.size());
  out["seed"] = seed;

  // Degeneracy of the bi-invariant family.
  std::vector<ExprMat> ebasis;
  for (const auto& M : basis) {
    ExprMat em = expr_matrix(sc.m, sc.m);
    for (int a = 0; a < sc.m; ++a)
      for (int b = 0; b < sc.m; ++b)
        em[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            Expression::from_rational(M[static_cast<std::size_t>(a)]
                                       [static_cast<std::size_t>(b)]);
    ebasis.push_back(std::move(em));
  }
  DegeneracyResult dg = degeneracy_probe(ebasis, sc.m, seed);
  out["degeneracy"] = degeneracy_name(dg.verdict);
  if (dg.verdict == DegeneracyVerdict::NondegenerateFound) {
    Json w = Json::array();
    for (const auto& v : dg.witness) w.push_back(to_string(v));
    out["witness"] = std::move(w);
  }
  return out;
}

}  // namespace fgordon
