#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgordon/multspace.hpp"

namespace fgordon {

enum class ClassLabel {
  ThreeLagrangians,
  TwoLagrangians,
  AtMostOne,
  STraceObstructed,
  NotNormalForm,
};

enum class TwoSubtype { Harmonic, Wave, DegenerateWvv, Unspecified };

const char* class_label_name(ClassLabel l);
const char* two_subtype_name(TwoSubtype s);

struct ClassificationVerdict {
  ClassLabel label = ClassLabel::AtMostOne;
  TwoSubtype subtype = TwoSubtype::Unspecified;
  int rank_A = -1;
  ExprMat h_minus_k;
  std::optional<Expression> lambda;   // the scalar when H = K = lambda I
  int multspace_dimension = -1;       // always cross-referenced
  bool reducible_not_constructed = false;
  std::optional<QVector> indefinite_witness;  // (c1,c2) with det < 0
  std::vector<std::string> notes;
};

/// The 4x3 matrix of algebraic conditions on (M11, M12, M22) for m = 2.
ExprMat build_A(const InvariantTriple& inv, int m);  // rejects m != 2

/// True iff the trace S^a_{ag} vanishes for every g; for m = 2 this forces
/// S identically zero by antisymmetry, so `false` obstructs any
/// nondegenerate multiplier.
bool trace_obstruction_clear(const InvariantTriple& inv, int m);

/// The m = 2 classification dispatch; cross-references the full
/// stabilization dimension in every branch.
ClassificationVerdict classify(FGordonSystem& sys,
                               std::uint64_t seed = kDefaultSeed);

/// Fiber-preserving affine change of variables: xb = a1 x + a0,
/// yb = b1 y + b0, ub = T u with constant invertible T.
struct AffineFiberMap {
  Rational a1 = 1, a0 = 0;
  Rational b1 = 1, b0 = 0;
  QMatrix T;
};

/// Transforms the system by the prolonged map, recomputes the invariants
/// and zero-tests them against the transformation law applied to the
/// originals.  Throws std::invalid_argument on non-invertible map data.
bool covariance_check(const FGordonSystem& sys, const AffineFiberMap& map);

}  // namespace fgordon
