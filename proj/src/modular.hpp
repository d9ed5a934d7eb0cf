#pragma once

// Word-size modular linear algebra with CRT lifting and rational
// reconstruction.  Used to propose exact solutions of the sampled linear
// systems; every proposed solution is checked exactly against the rational
// rows (and re-verified symbolically by the callers), so the modular layer
// never decides anything on its own.

#include <cstdint>
#include <optional>
#include <vector>

#include "fgordon/linalg.hpp"

namespace fgordon::detail {

std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p);

/// Residue of a rational; nullopt when the denominator is divisible by p.
std::optional<std::uint64_t> mod_reduce(const Rational& r, std::uint64_t p);

/// Incremental row-reduced form mod p over rows of fixed width.
class ModRref {
 public:
  ModRref(int width, std::uint64_t p) : width_(width), p_(p) {}

  /// Reduces the row against the current basis; if independent, inserts it
  /// and returns true.
  bool add(std::vector<std::uint64_t> row);
  int rank() const { return static_cast<int>(rows_.size()); }
  bool has_pivot(int col) const;

 private:
  int width_;
  std::uint64_t p_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<int> piv_;
};

struct ModSolution {
  bool usable = false;      // all rows reduced without hitting p in a denominator
  bool consistent = false;  // no pivot in the rhs column
  int rank = 0;
  std::vector<int> pivots;  // ascending, excluding the rhs column
  std::vector<std::vector<std::uint64_t>> kernel;  // canonical basis mod p
  std::vector<std::uint64_t> particular;
};

/// Full RREF solve of A x = b mod p with the canonical kernel construction
/// (free columns ascending, unit free entry).
ModSolution mod_solve(const QMatrix& a, const QVector& b, int cols,
                      std::uint64_t p);

/// Wang-style rational reconstruction of residue r mod m with numerator and
/// denominator bounded by sqrt(m/2).
std::optional<Rational> rational_reconstruct(const Integer& r,
                                             const Integer& m);

/// Deterministic sequence of distinct primes just below 2^62.
std::uint64_t nth_solver_prime(int i);

}  // namespace fgordon::detail
