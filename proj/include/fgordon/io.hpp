#pragma once

#include <json.hpp>

#include "fgordon/classify2d.hpp"
#include "fgordon/liealgebra.hpp"
#include "fgordon/multspace.hpp"
#include "fgordon/varlagrange.hpp"

namespace fgordon {

using Json = nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// {"m": int, "dependent": [names], "f": [expr strings]} with optional
/// "parameters" and "normal_form" override (validated against f).
FGordonSystem system_from_json(const Json& doc);
Json system_to_json(const FGordonSystem& sys);

/// {"L": "expr"} or {"R": [[..]], "Q": [..], "P": [..], "N": ".."}.
Lagrangian lagrangian_from_json(const Json& doc, const NameTable& names);
Json lagrangian_to_json(const Lagrangian& lag, const NameTable& names, int m);

/// {"M": [[expr strings]]}.
ExprMat multiplier_from_json(const Json& doc, const NameTable& names);

/// {"m": int, "brackets": [{"i": a, "j": b, "coeffs": [rationals]}]};
/// antisymmetry completed automatically.
StructureConstants structure_constants_from_json(const Json& doc);

Json invariants_report(FGordonSystem& sys);
Json multiplier_report_to_json(const MultiplierReport& rep,
                               const NameTable& names);
Json classification_to_json(const ClassificationVerdict& v,
                            const NameTable& names, std::uint64_t seed);
Json verify_report(const VerifyResult& vr, const NameTable& names);
Json construction_report(const ConstructionResult& cr, const NameTable& names,
                         int m);
Json lie_report(const StructureConstants& sc, std::uint64_t seed);

}  // namespace fgordon
