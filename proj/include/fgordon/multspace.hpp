#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgordon/jetgeom.hpp"
#include "fgordon/linalg.hpp"

namespace fgordon {

/// The m(m+1)/2 symmetric unknowns M_{ab}, a <= b, enumerated
/// (1,1),(1,2),...,(1,m),(2,2),...,(m,m).
int unknown_count(int m);
int unknown_index(int a, int b, int m);        // 1-based pair -> 0-based slot
std::pair<int, int> unknown_pair(int idx, int m);
std::string unknown_name(int idx, int m);       // "M11", "M12", ...

/// One linear constraint sum_u c[u] * M_u = 0 with coefficients in (x,y,u).
struct PhiRow {
  std::vector<Expression> c;
  int stage = 0;
  std::string origin;
};

/// Growing constraint system; stage-i rows are kept when augmenting.
struct PhiSystem {
  int m = 0;
  int stage = 0;
  std::vector<PhiRow> rows;
};

/// Builds the stage-0 system from the algebraic conditions: for every index
/// pair (a,b) the rows of M H = (M K)^T paired by gradient monomial, and for
/// every (a,b,g) the S-symmetry rows.  Rows are sign/scale normalized,
/// identically-zero rows and exact duplicates dropped.
PhiSystem build_phi0(const InvariantTriple& inv, int m,
                     const NameTable& names);

/// One differentiation stage: for each newest row and each direction in
/// (x, y, u^1..u^m), the derived row with the connection correction,
/// symmetrized onto the (a <= b) unknowns.
PhiSystem augment(const PhiSystem& phi, const ConnectionForm& omega,
                  const NameTable& names);

struct PointRecord {
  Point point;
  int rank = 0;
};

struct RankResult {
  int rank = 0;                     // max over sample points
  std::vector<PointRecord> points;  // all evaluated points with their ranks
  bool stratified = false;          // ranks differ across points
  int base_index = -1;              // first point attaining the max
};

/// Exact rank at kSamplePoints random rational points (fraction-free
/// elimination); opaque atoms are valued as independent indeterminates.
RankResult generic_rank(const PhiSystem& phi, std::uint64_t seed);

enum class DegeneracyVerdict { NondegenerateFound, AllDegenerate, Undetermined };

struct DegeneracyResult {
  DegeneracyVerdict verdict = DegeneracyVerdict::Undetermined;
  QVector witness;       // combination coefficients, when nondegenerate
  Expression det;        // det of the general combination, params c1..cs
  Certainty certainty = Certainty::Exact;
};

/// Tests whether some linear combination of the basis matrices is
/// nondegenerate: the determinant of the general combination is formed with
/// parameter atoms and zero-tested exactly; a rational witness is then
/// located by sampling.
DegeneracyResult degeneracy_probe(const std::vector<ExprMat>& basis, int m,
                                  std::uint64_t seed);

struct MultiplierReport {
  int m = 0;
  int stabilized_stage = 0;
  int rank = 0;
  int dimension = 0;
  std::vector<QMatrix> pointwise_basis;  // constant nullspace at the base point
  std::vector<ExprMat> basis;            // verified closed forms (may be empty)
  bool closed_form = false;
  DegeneracyResult degeneracy;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  int degree_cap = 4;
  std::vector<PointRecord> sample_points;
  Point base_point;
  PhiSystem phi;  // final stabilized system (carries row provenance)
};

/// Reconstructs explicit multiplier matrices: constants when the connection
/// form vanishes, otherwise a polynomial ansatz in (x,y,u) extended by the
/// opaque atoms of the system coefficients, solved as an exact linear
/// system against the algebraic rows and the differential condition.  Every
/// returned matrix has been re-verified by zero tests.
std::vector<ExprMat> reconstruct_solutions(const MultiplierReport& report,
                                           const PhiSystem& phi,
                                           const ConnectionForm& omega,
                                           int degree_cap);

/// Full pipeline: normal form, invariants, stage-0 system, augmentation to
/// rank stabilization, nullspace at a base point, reconstruction and the
/// degeneracy probe.  Requires the normal form (throws std::invalid_argument
/// otherwise; callers surface that as the no-multiplier refusal).
MultiplierReport stabilize(FGordonSystem& sys, std::uint64_t seed,
                           int degree_cap = 4);

}  // namespace fgordon
