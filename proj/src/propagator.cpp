#include "tripent/propagator.hpp"

#include <cmath>
#include <string>

namespace tripent {
namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidInput("time must be finite and non-negative, got " + std::to_string(t));
  }
}

void require_regime(const Couplings& c, RegimeKind want, const Regime& got) {
  if (got.kind != want) {
    throw WrongRegime("couplings (" + std::to_string(c.kappa1()) + ", " + std::to_string(c.kappa2()) +
                      ") are " + to_string(got.kind) + ", not " + to_string(want));
  }
}

// Every regime shares one structure. With s = k1^2 - k2^2:
//   even(t) = cosh(sqrt(s) t), odd(t) = sinh(sqrt(s) t)/sqrt(s), rise(t) = (even - 1)/s
// (cos/sin for s < 0, 1, t, t^2/2 for s = 0).
struct Kernel {
  double even;
  double odd;
  double rise;
};

PropagatorPair assemble(const Couplings& c, const Kernel& f, double t) {
  const double k1 = c.kappa1();
  const double k2 = c.kappa2();
  PropagatorPair p;
  p.t = t;
  // clang-format off
  p.mx << 1.0 + k1 * k1 * f.rise, -k1 * k2 * f.rise,       k1 * f.odd,
          k1 * k2 * f.rise,        1.0 - k2 * k2 * f.rise,  k2 * f.odd,
          k1 * f.odd,              -k2 * f.odd,             f.even;
  p.my << 1.0 + k1 * k1 * f.rise,  k1 * k2 * f.rise,       -k1 * f.odd,
          -k1 * k2 * f.rise,       1.0 - k2 * k2 * f.rise,  k2 * f.odd,
          -k1 * f.odd,             -k2 * f.odd,             f.even;
  // clang-format on
  return p;
}

}  // namespace

DriftPair drift_matrices(const Couplings& c) {
  const double k1 = c.kappa1();
  const double k2 = c.kappa2();
  DriftPair d;
  // clang-format off
  d.ax << 0.0, 0.0, k1,
          0.0, 0.0, k2,
          k1,  -k2, 0.0;
  d.ay << 0.0, 0.0, -k1,
          0.0, 0.0, k2,
          -k1, -k2, 0.0;
  // clang-format on
  return d;
}

PropagatorPair propagator_hyperbolic(const Couplings& c, double t) {
  require_time(t);
  const Regime r = classify_regime(c);
  require_regime(c, RegimeKind::Hyperbolic, r);
  const double omega = r.rate;
  const double x = omega * t;
  const double half = std::sinh(0.5 * x);
  const double cosh_m1 = 2.0 * half * half;  // cosh(x) - 1
  return assemble(c, {1.0 + cosh_m1, std::sinh(x) / omega, cosh_m1 / (omega * omega)}, t);
}

PropagatorPair propagator_periodic(const Couplings& c, double t) {
  require_time(t);
  const Regime r = classify_regime(c);
  require_regime(c, RegimeKind::Periodic, r);
  const double xi = r.rate;
  const double x = xi * t;
  const double half = std::sin(0.5 * x);
  const double one_m_cos = 2.0 * half * half;  // 1 - cos(x)
  return assemble(c, {std::cos(x), std::sin(x) / xi, one_m_cos / (xi * xi)}, t);
}

PropagatorPair propagator_degenerate(const Couplings& c, double t) {
  require_time(t);
  const Regime r = classify_regime(c);
  require_regime(c, RegimeKind::Degenerate, r);
  const double k1 = c.kappa1();
  const double k2 = c.kappa2();
  const double u = (k1 - k2) * (k1 + k2) * t * t;

  // even = sum u^n/(2n)!, odd = t sum u^n/(2n+1)!, rise = t^2 sum u^n/(2n+2)!
  double even = 0.0;
  double odd = 0.0;
  double rise = 0.0;
  double term = 1.0;  // u^n / (2n)!
  for (int n = 0; n < 60; ++n) {
    const double odd_term = term / (2.0 * n + 1.0);
    const double rise_term = odd_term / (2.0 * n + 2.0);
    even += term;
    odd += odd_term;
    rise += rise_term;
    if (std::abs(term) <= 1e-18 * std::abs(even) && n > 0) break;
    term = rise_term * u;
  }
  return assemble(c, {even, odd * t, rise * t * t}, t);
}

PropagatorPair propagator_analytic(const Couplings& c, double t) {
  switch (classify_regime(c).kind) {
    case RegimeKind::Hyperbolic:
      return propagator_hyperbolic(c, t);
    case RegimeKind::Periodic:
      return propagator_periodic(c, t);
    case RegimeKind::Degenerate:
      break;
  }
  return propagator_degenerate(c, t);
}

Mat3 expm(const Mat3& a) {
  constexpr int kTerms = 20;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Mat3 scaled = a / std::ldexp(1.0, squarings);

  // Horner form of sum_{k=0}^{kTerms} scaled^k / k!
  Mat3 result = Mat3::Identity();
  for (int k = kTerms; k >= 1; --k) {
    result = Mat3::Identity() + scaled * result / static_cast<double>(k);
  }
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  return result;
}

PropagatorPair propagator_expm(const Couplings& c, double t) {
  require_time(t);
  const DriftPair d = drift_matrices(c);
  return {expm(d.ax * t), expm(d.ay * t), t};
}

MomentState moments_from(const PropagatorPair& p) {
  MomentState m{p.mx * p.mx.transpose(), p.my * p.my.transpose()};
  // Symmetrize against rounding in the products.
  m.cx = (0.5 * (m.cx + m.cx.transpose())).eval();
  m.cy = (0.5 * (m.cy + m.cy.transpose())).eval();
  return m;
}

MomentState moments_at(const Couplings& c, double t, MomentMethod method) {
  return moments_from(method == MomentMethod::Expm ? propagator_expm(c, t) : propagator_analytic(c, t));
}

MomentState closed_form_moments(const Couplings& c, double t) {
  require_time(t);
  const Regime r = classify_regime(c);
  if (r.kind == RegimeKind::Degenerate) {
    throw WrongRegime("closed-form moments are undefined for degenerate couplings; use MomentMethod::Expm");
  }
  const double k1 = c.kappa1();
  const double k2 = c.kappa2();
  const double k1s = k1 * k1;
  const double k2s = k2 * k2;
  const double x = r.rate * t;
  const double r2 = r.rate * r.rate;
  const double r3 = r2 * r.rate;
  const double r4 = r2 * r2;

  double x11, x22, x33, x12, x13, x23;
  if (r.kind == RegimeKind::Hyperbolic) {
    const double ch = std::cosh(x);
    const double sh = std::sinh(x);
    const double hs = std::sinh(0.5 * x);
    const double ch_m1 = 2.0 * hs * hs;  // cosh - 1
    x11 = 1.0 + 2.0 * k1s / r4 * (k1s * sh * sh - 2.0 * k2s * ch_m1);
    x22 = 1.0 + (2.0 * k1s * k2s * ch_m1 * ch_m1) / r4;
    x33 = 1.0 + 2.0 * k1s * sh * sh / r2;
    x12 = k1 * k2 / r4 * ((k1s + k2s) * ch_m1 * ch_m1 + r2 * sh * sh);
    x13 = 2.0 * k1 * sh / r3 * (k1s * ch - k2s);
    x23 = 2.0 * k1s * k2 / r3 * ch_m1 * sh;
  } else {
    const double sn = std::sin(x);
    const double hs = std::sin(0.5 * x);
    const double one_m_cos = 2.0 * hs * hs;  // 1 - cos
    x11 = 1.0 + 2.0 * k1s * (2.0 * k2s * one_m_cos - k1s * sn * sn) / r4;
    x22 = 1.0 + 2.0 * k1s * k2s * one_m_cos * one_m_cos / r4;
    x33 = 1.0 + 2.0 * k1s * sn * sn / r2;
    x12 = 2.0 * k1 * k2 / r4 * ((k1s + k2s) * one_m_cos - k1s * sn * sn);
    x13 = k1 / r3 * (2.0 * k2s * sn - k1s * std::sin(2.0 * x));
    x23 = 2.0 * k1s * k2 * sn / r3 * one_m_cos;
  }

  MomentState m;
  // clang-format off
  m.cx << x11, x12, x13,
          x12, x22, x23,
          x13, x23, x33;
  m.cy << x11,  -x12, -x13,
          -x12, x22,  x23,
          -x13, x23,  x33;
  // clang-format on
  return m;
}

}  // namespace tripent
