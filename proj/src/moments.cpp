#include "tripent/moments.hpp"

#include <algorithm>
#include <cmath>

namespace tripent {

Couplings::Couplings(double kappa1, double kappa2) : kappa1_(kappa1), kappa2_(kappa2) {
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) || kappa1 <= 0.0 || kappa2 <= 0.0) {
    throw InvalidInput("couplings must be finite and positive (kappa1=" + std::to_string(kappa1) +
                       ", kappa2=" + std::to_string(kappa2) + ")");
  }
}

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Hyperbolic:
      return "hyperbolic";
    case RegimeKind::Periodic:
      return "periodic";
    case RegimeKind::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

Regime classify_regime(const Couplings& c, double tol) {
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw InvalidInput("regime tolerance must be finite and non-negative");
  }
  const double k1 = c.kappa1();
  const double k2 = c.kappa2();
  // Factored difference keeps full relative precision when k1 ~ k2.
  const double diff = (k1 - k2) * (k1 + k2);
  const double scale = std::max(k1 * k1, k2 * k2);
  if (std::abs(diff) <= tol * scale) {
    return {RegimeKind::Degenerate, 0.0};
  }
  const double rate = std::sqrt(std::abs(diff));
  return {diff > 0.0 ? RegimeKind::Hyperbolic : RegimeKind::Periodic, rate};
}

Couplings kappa_from_pump(const PumpConfig& p) {
  const double k1 = p.chi1 * p.pump4;
  const double k2 = p.chi2 * p.pump5;
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw InvalidInput("chi * pump products must be real positive constants");
  }
  return {k1, k2};
}

MomentState vacuum_moments() { return {Mat3::Identity(), Mat3::Identity()}; }

}  // namespace tripent
