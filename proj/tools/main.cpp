// Command-line driver: analyze hyperbolic systems u_xy = f(x,y,u,u_x,u_y)
// for variational multipliers, classify two-component systems, verify and
// construct Lagrangians, and run the bundled golden corpus.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fgordon/corpus.hpp"

namespace {

using namespace fgordon;

Json load_json(const std::string& path) {
  if (path.empty()) throw InputError("empty input path");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("bad JSON in '" + path + "': " + e.what());
  }
}

void emit(const Json& report, const std::string& output) {
  std::string text = report.dump(2);
  if (output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(output);
    if (!out) throw InputError("cannot write '" + output + "'");
    out << text << "\n";
  }
}

struct Options {
  std::string system_path;
  std::string lagrangian_path;
  std::string multiplier_path;
  std::string output;
  std::string corpus_path;
  bool corpus_dump = false;
  std::uint64_t seed = kDefaultSeed;
  int degree_cap = 4;
};

int run_invariants(const Options& opt) {
  FGordonSystem sys = system_from_json(load_json(opt.system_path));
  Json rep = invariants_report(sys);
  emit(rep, opt.output);
  std::cerr << "invariants computed for m = " << sys.m << " ("
            << (rep["normal_form"].is_null() ? "no normal form"
                                             : "normal form present")
            << ")\n";
  return 0;
}

int run_multipliers(const Options& opt) {
  FGordonSystem sys = system_from_json(load_json(opt.system_path));
  if (!check_normal_form(sys)) {
    Json rep;
    rep["dimension"] = 0;
    rep["verdict"] =
        "no first-order variational multiplier exists (the second-derivative "
        "conditions fail)";
    rep["seed"] = opt.seed;
    emit(rep, opt.output);
    std::cerr << "not variational: normal-form conditions fail\n";
    return 0;
  }
  MultiplierReport rep = stabilize(sys, opt.seed, opt.degree_cap);
  emit(multiplier_report_to_json(rep, sys.names), opt.output);
  std::cerr << "multiplier space dimension " << rep.dimension << " (rank "
            << rep.rank << ", stage " << rep.stabilized_stage << ")\n";
  return 0;
}

int run_classify(const Options& opt) {
  FGordonSystem sys = system_from_json(load_json(opt.system_path));
  if (sys.m != 2) throw InputError("classify handles m = 2 systems only");
  ClassificationVerdict v = classify(sys, opt.seed);
  emit(classification_to_json(v, sys.names, opt.seed), opt.output);
  std::cerr << "verdict: " << class_label_name(v.label) << "\n";
  return 0;
}

int run_verify(const Options& opt) {
  FGordonSystem sys = system_from_json(load_json(opt.system_path));
  Lagrangian L = lagrangian_from_json(load_json(opt.lagrangian_path), sys.names);
  ExprMat M = multiplier_from_json(load_json(opt.multiplier_path), sys.names);
  VerifyResult vr = verify_multiplier(L, M, sys);
  emit(verify_report(vr, sys.names), opt.output);
  std::cerr << (vr.ok ? "identity holds" : "identity fails") << "\n";
  return 0;
}

int run_construct(const Options& opt) {
  FGordonSystem sys = system_from_json(load_json(opt.system_path));
  ExprMat M = multiplier_from_json(load_json(opt.multiplier_path), sys.names);
  ConstructionResult cr = construct_lagrangian(M, sys, opt.degree_cap);
  emit(construction_report(cr, sys.names, sys.m), opt.output);
  std::cerr << cr.message << "\n";
  return 0;
}

int run_lie(const Options& opt) {
  StructureConstants sc =
      structure_constants_from_json(load_json(opt.system_path));
  emit(lie_report(sc, opt.seed), opt.output);
  std::cerr << "analyzed a " << sc.m << "-dimensional algebra\n";
  return 0;
}

int run_corpus_cmd(const Options& opt) {
  if (opt.corpus_dump) {
    emit(builtin_corpus(), opt.output);
    return 0;
  }
  Json corpus =
      opt.corpus_path.empty() ? builtin_corpus() : load_json(opt.corpus_path);
  CorpusRunResult r = fgordon::run_corpus(corpus, opt.seed);
  std::cout << corpus_table(r);
  return r.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "variational multiplier analysis for hyperbolic systems "
      "u_xy = f(x,y,u,u_x,u_y)"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output,-o", opt.output, "write the JSON report here");
  };
  auto add_seeded = [&](CLI::App* cmd) {
    add_common(cmd);
    cmd->add_option("--seed", opt.seed, "random seed (echoed in reports)");
  };

  auto* inv = app.add_subcommand("invariants",
                                 "compute H, K, S and the normal form");
  inv->add_option("system", opt.system_path, "system JSON document")
      ->required();
  add_common(inv);

  auto* mult = app.add_subcommand(
      "multipliers", "dimension and basis of the multiplier space");
  mult->add_option("system", opt.system_path, "system JSON document")
      ->required();
  mult->add_option("--degree-cap", opt.degree_cap,
                   "polynomial ansatz degree for reconstruction");
  add_seeded(mult);

  auto* cls = app.add_subcommand("classify",
                                 "Lagrangian-count classification (m = 2)");
  cls->add_option("system", opt.system_path, "system JSON document")
      ->required();
  add_seeded(cls);

  auto* ver = app.add_subcommand("verify",
                                 "check E(L) = M (u_xy - f) off shell");
  ver->add_option("system", opt.system_path, "system JSON document")
      ->required();
  ver->add_option("lagrangian", opt.lagrangian_path,
                  "Lagrangian JSON document")
      ->required();
  ver->add_option("multiplier", opt.multiplier_path,
                  "multiplier JSON document")
      ->required();
  add_common(ver);

  auto* con = app.add_subcommand(
      "construct", "build a Lagrangian for a verified multiplier");
  con->add_option("system", opt.system_path, "system JSON document")
      ->required();
  con->add_option("multiplier", opt.multiplier_path,
                  "multiplier JSON document")
      ->required();
  con->add_option("--degree-cap", opt.degree_cap, "ansatz degree cap");
  add_common(con);

  auto* lie = app.add_subcommand(
      "lie", "bi-invariant forms and the associated quadratic system");
  lie->add_option("constants", opt.system_path,
                  "structure-constant JSON document")
      ->required();
  add_seeded(lie);

  auto* cor = app.add_subcommand("corpus", "run the bundled golden corpus");
  cor->add_option("--file", opt.corpus_path, "external corpus JSON");
  cor->add_flag("--dump", opt.corpus_dump, "print the bundled corpus");
  add_seeded(cor);

  CLI11_PARSE(app, argc, argv);

  try {
    if (inv->parsed()) return run_invariants(opt);
    if (mult->parsed()) return run_multipliers(opt);
    if (cls->parsed()) return run_classify(opt);
    if (ver->parsed()) return run_verify(opt);
    if (con->parsed()) return run_construct(opt);
    if (lie->parsed()) return run_lie(opt);
    if (cor->parsed()) return run_corpus_cmd(opt);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
