#pragma once

// Exact solutions of the linear quadrature equations of motion
//
//   dX1/dt =  k1 X3        dY1/dt = -k1 Y3
//   dX2/dt =  k2 X3        dY2/dt =  k2 Y3
//   dX3/dt =  k1 X1 - k2 X2   dY3/dt = -k1 Y1 - k2 Y2
//
// in the hyperbolic (k1 > k2), periodic (k2 > k1) and degenerate regimes,
// plus a regime-independent matrix exponential.

#include "tripent/moments.hpp"

namespace tripent {

/// Constant drift blocks: dX/dt = ax X, dY/dt = ay Y (rows ordered by mode).
struct DriftPair {
  Mat3 ax;
  Mat3 ay;
};

DriftPair drift_matrices(const Couplings& c);

PropagatorPair propagator_hyperbolic(const Couplings& c, double t);
PropagatorPair propagator_periodic(const Couplings& c, double t);

/// Limit of the closed forms as the rate goes to zero; polynomial in k t
/// when k1 == k2 and still exact anywhere inside the degenerate band.
PropagatorPair propagator_degenerate(const Couplings& c, double t);

/// Dispatches on classify_regime(c).
PropagatorPair propagator_analytic(const Couplings& c, double t);

PropagatorPair propagator_expm(const Couplings& c, double t);

/// exp(a) by Taylor series with scaling and squaring: a is scaled by 2^-s so
/// that its 1-norm is at most 0.5, then 20 terms are summed and squared back.
Mat3 expm(const Mat3& a);

enum class MomentMethod { Analytic, Expm };

/// Push the vacuum covariance forward: cx = mx mx^T, cy = my my^T.
MomentState moments_from(const PropagatorPair& p);

MomentState moments_at(const Couplings& c, double t, MomentMethod method = MomentMethod::Analytic);

/// Direct transcription of the closed-form moment expressions (six per
/// block, with <X1X2> = -<Y1Y2>, <X1X3> = -<Y1Y3>, <X2X3> = <Y2Y3>).
/// Throws WrongRegime for degenerate couplings.
MomentState closed_form_moments(const Couplings& c, double t);

}  // namespace tripent
