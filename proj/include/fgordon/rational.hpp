#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgordon {

using Integer = mpz_class;
using Rational = mpq_class;

/// Default seed used whenever a caller does not pin one; every report echoes
/// the seed that was actually used so runs can be replayed.
inline constexpr std::uint64_t kDefaultSeed = 271828183;

/// Number of random evaluation points per probabilistic zero test and per
/// generic-rank computation.
inline constexpr int kSamplePoints = 8;

/// Bound on numerator/denominator magnitude for random rational sampling.
inline constexpr long kSampleBound = 1000000;

std::string to_string(const Rational& r);

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on junk.
Rational rational_from_string(const std::string& s);

/// Deterministic stream of random rationals with numerator in
/// [-kSampleBound, kSampleBound] and denominator in [1, kSampleBound].
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational next() {
    std::uniform_int_distribution<long> num(-kSampleBound, kSampleBound);
    std::uniform_int_distribution<long> den(1, kSampleBound);
    Rational r(num(rng_), den(rng_));
    r.canonicalize();
    return r;
  }

  /// Small rationals, handy for fuzzed coefficients.
  Rational next_small(long bound) {
    std::uniform_int_distribution<long> num(-bound, bound);
    std::uniform_int_distribution<long> den(1, bound);
    Rational r(num(rng_), den(rng_));
    r.canonicalize();
    return r;
  }

  long next_int(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fgordon
