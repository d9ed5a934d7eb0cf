#pragma once

#include <vector>

#include "fgordon/linalg.hpp"
#include "fgordon/varlagrange.hpp"

namespace fgordon {

/// Structure constants C^a_{bg} of an m-dimensional Lie algebra over Q,
/// validated for antisymmetry and the Jacobi identity at construction.
struct StructureConstants {
  int m = 0;
  std::vector<std::vector<QVector>> c;  // c[a][b][g] = C^a_{bg}

  const Rational& at(int a, int b, int g) const {
    return c[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]
            [static_cast<std::size_t>(g - 1)];
  }
};

/// Builds and validates structure constants.  When `complete_antisymmetry`
/// is set, only the b < g entries need to be provided and C^a_{gb} = -C^a_{bg}
/// is filled in.  Throws std::invalid_argument on antisymmetry or Jacobi
/// failure.
StructureConstants make_structure_constants(
    int m, std::vector<std::vector<QVector>> c,
    bool complete_antisymmetry = false);

/// K_{ab} = C^s_{at} C^t_{bs}; symmetric, and always bi-invariant.
QMatrix killing_form(const StructureConstants& sc);

/// Exact rational nullspace of the bi-invariance condition
/// M_{ag} C^g_{be} + M_{bg} C^g_{ae} = 0 on symmetric M, in the fixed
/// unknown order.
std::vector<QMatrix> biinvariant_forms(const StructureConstants& sc);

/// The associated system u^a_xy + C^a_{bg} u^b_x u^g_y = 0.
FGordonSystem lie_system(const StructureConstants& sc);

/// The cubic Lagrangian attached to a bi-invariant form M; rejects M that
/// fail the bi-invariance condition.
Lagrangian lie_lagrangian(const QMatrix& M, const StructureConstants& sc);

/// Convenience: does M solve the bi-invariance condition?
bool is_biinvariant(const QMatrix& M, const StructureConstants& sc);

}  // namespace fgordon
