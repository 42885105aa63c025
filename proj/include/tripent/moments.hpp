#pragma once

// Quadrature second-moment data model for the three output modes of the
// interlinked down-conversion / sum-frequency system.
//
// Conventions: X = a + a^dag, Y = -i(a - a^dag), so the vacuum variance is 1
// and V(X_j) V(Y_j) >= 1. All means vanish (vacuum inputs, linear dynamics),
// so second moments are variances and covariances directly.

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace tripent {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a regime-specific routine is handed couplings from another regime.
class WrongRegime : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Effective interaction strengths kappa_i = chi_i * <a_pump(0)> (inverse time).
class Couplings {
 public:
  Couplings(double kappa1, double kappa2);

  double kappa1() const { return kappa1_; }
  double kappa2() const { return kappa2_; }

  /// Same ratio, every rate multiplied by `s` (time then scales as 1/s).
  Couplings scaled(double s) const { return {kappa1_ * s, kappa2_ * s}; }

 private:
  double kappa1_;
  double kappa2_;
};

/// Nonlinear couplings and classical pump amplitudes <a4(0)>, <a5(0)>.
struct PumpConfig {
  double chi1 = 0.0;
  double chi2 = 0.0;
  double pump4 = 0.0;
  double pump5 = 0.0;
};

enum class RegimeKind { Hyperbolic, Periodic, Degenerate };

std::string to_string(RegimeKind kind);

struct Regime {
  RegimeKind kind;
  // Omega = sqrt(k1^2 - k2^2), xi = sqrt(k2^2 - k1^2), or 0.
  double rate;
};

/// Relative tolerance on |k1^2 - k2^2| / max(k1^2, k2^2) below which the
/// couplings are treated as degenerate.
inline constexpr double kDefaultRegimeTol = 1e-9;

Regime classify_regime(const Couplings& c, double tol = kDefaultRegimeTol);

Couplings kappa_from_pump(const PumpConfig& p);

enum class Quadrature { X, Y };

/// Linear maps taking (X_1, X_2, X_3)(0) and (Y_1, Y_2, Y_3)(0) to time t.
struct PropagatorPair {
  Mat3 mx = Mat3::Identity();
  Mat3 my = Mat3::Identity();
  double t = 0.0;
};

/// <X_i X_j> and <Y_i Y_j>. X-Y cross moments vanish identically and are not stored.
struct MomentState {
  Mat3 cx = Mat3::Identity();
  Mat3 cy = Mat3::Identity();

  const Mat3& block(Quadrature q) const { return q == Quadrature::X ? cx : cy; }
};

MomentState vacuum_moments();

}  // namespace tripent
