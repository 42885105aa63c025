#pragma once

// Verification paths that share no formulas with the closed forms: explicit
// RK4 integration of the equations of motion and Monte-Carlo sampling of the
// vacuum quadrature statistics, plus entrywise moment comparison.

#include "tripent/moments.hpp"

#include <cstdint>

namespace tripent {

/// Integrates dM/dt = A M from M(0) = I for both blocks with `steps` equal RK4 steps.
PropagatorPair rk4_propagator(const Couplings& c, double t, int steps);

/// Samples per RNG stream; stream b is seeded from (seed, b) so the result
/// does not depend on how streams are spread over workers.
inline constexpr std::int64_t kMcBlockSize = 1 << 15;

/// Sample second moments of n vacuum draws pushed through the exact
/// propagator. workers == 0 uses the hardware concurrency.
MomentState mc_moments(const Couplings& c, double t, std::int64_t n, std::uint64_t seed, unsigned workers = 0);

struct WorstEntry {
  Quadrature block = Quadrature::X;
  int i = 0;
  int j = 0;
  double t = 0.0;
};

struct ComparisonReport {
  double max_abs_err = 0.0;
  // |a - b| / max(1, |b|); this is also the pass metric.
  double max_rel_err = 0.0;
  WorstEntry worst;
  bool pass = true;
  double tolerance = 0.0;

  /// Fold another report in (same tolerance); keeps the worst entry.
  void merge(const ComparisonReport& other);
};

/// Entrywise comparison of `a` against reference `b`. `t` only labels the worst entry.
ComparisonReport compare_moments(const MomentState& a, const MomentState& b, double tol, double t = 0.0);

}  // namespace tripent
