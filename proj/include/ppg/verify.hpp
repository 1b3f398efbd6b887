#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppg/constructions.hpp"
#include "ppg/moebius.hpp"
#include "ppg/numbers.hpp"
#include "ppg/piecewise.hpp"
#include "ppg/quadratic.hpp"

namespace ppg {

/// splitmix64; fixed here so suite runs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi], inclusive.
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return next() & 1; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[next() % v.size()];
  }

 private:
  std::uint64_t state_;
};

// Corpus generators, shared between the acceptance suite and unit tests.
PrimeSet random_ring(Rng& rng);
Rational random_ring_rational(Rng& rng, const PrimeSet& T, long height);
RealQuadratic random_quadratic(Rng& rng);
SL2Matrix random_sl2(Rng& rng);

/// Splices a hyperbolic matrix with finite fixed points into the line:
/// identity outside the axis interval, M between its fixed points.
PPMap bump_from(const SL2Matrix& M);

PPMap random_ppmap(Rng& rng, const PrimeSet& T);

struct CriterionResult {
  int index;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

/// Runs the seven acceptance criteria in order, never aborting early.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed);

}  // namespace ppg
