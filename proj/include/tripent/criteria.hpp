#pragma once

// Tripartite entanglement witnesses evaluated on a MomentState:
//  * van Loock-Furusawa sums V_ij = V(X_i - X_j) + V(Y_i + Y_j + g_k Y_k), bound 4,
//    raw (unit gains) and with the variance-minimising gains;
//  * three-mode EPR products of inferred variances, single-mode form (bound 1)
//    and two-mode form (bound 4).

#include "tripent/moments.hpp"

#include <array>

namespace tripent {

class UnsupportedCombination : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One of the three output modes, numbered 1..3.
class Mode {
 public:
  explicit Mode(int number);
  int number() const { return number_; }
  int index() const { return number_ - 1; }
  friend bool operator==(Mode, Mode) = default;

 private:
  int number_;
};

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// Linear combination sum_i w_i Q_i of one quadrature over the three modes.
class QuadCombo {
 public:
  QuadCombo(Quadrature quad, const Vec3& weights);

  Quadrature quad() const { return quad_; }
  const Vec3& weights() const { return weights_; }

 private:
  Quadrature quad_;
  Vec3 weights_;
};

double combo_variance(const MomentState& m, const QuadCombo& a);

/// Throws UnsupportedCombination when a and b use different quadratures.
double combo_covariance(const MomentState& m, const QuadCombo& a, const QuadCombo& b);

/// Inference denominators below this carry no information; the correction is dropped.
inline constexpr double kMinInferenceDenominator = 1e-12;

/// V(Q_i) - V(Q_i, Q_j +- Q_k)^2 / V(Q_j +- Q_k), with j < k the other modes.
double inferred_variance_single(const MomentState& m, Quadrature quad, Mode i, Sign sign);

/// V^inf(X_i) V^inf(Y_i); values below 1 demonstrate the single-mode EPR form.
double obr_single(const MomentState& m, Mode i, Sign sign = Sign::Plus);

/// V(Q_j +- Q_k) - V(Q_i, Q_j +- Q_k)^2 / V(Q_i), i the remaining mode.
double inferred_variance_pair(const MomentState& m, Quadrature quad, Mode j, Mode k, Sign sign);

/// V^inf(X_j +- X_k) V^inf(Y_j +- Y_k); values below 4 demonstrate the pair EPR form.
double obr_pair(const MomentState& m, Mode j, Mode k, Sign sign = Sign::Plus);

struct VlfGains {
  double g1 = 1.0;
  double g2 = 1.0;
  double g3 = 1.0;

  double operator[](int index) const { return index == 0 ? g1 : (index == 1 ? g2 : g3); }
};

/// g = 1 for every mode: the sums before any optimisation.
inline constexpr VlfGains kUnitGains{1.0, 1.0, 1.0};

/// Gains minimising each V(Y_i + Y_j + g_k Y_k): g_k = -(<Y_k Y_i> + <Y_k Y_j>) / <Y_k^2>.
VlfGains vlf_gains(const MomentState& m);

/// V(X_i - X_j) + V(Y_i + Y_j + g_k Y_k) for the pair (i, j), k the third mode.
double vlf_value(const MomentState& m, Mode i, Mode j, const VlfGains& gains);

/// Relative margin for the tripartite flags. OBR_2 and OBR_3 sit exactly on
/// their bound for this system and round to either side of it.
inline constexpr double kFlagMargin = 1e-9;

struct CriteriaReport {
  double t = 0.0;
  Sign sign = Sign::Plus;
  // Pairs ordered (1,2), (1,3), (2,3).
  std::array<double, 3> vlf_raw{};
  std::array<double, 3> vlf_opt{};
  VlfGains gains;
  // obr1, obr2, obr3.
  std::array<double, 3> obr_single{};
  // obr23, obr13, obr12.
  std::array<double, 3> obr_pair{};

  // Sufficient conditions for genuine tripartite entanglement. False means
  // "not demonstrated", never "separable". A value counts as below its bound
  // only if it is below bound * (1 - kFlagMargin).
  bool vlf_tripartite = false;         // at least two optimised sums < 4
  bool obr_single_tripartite = false;  // all three singles < 1
  bool obr_pair_tripartite = false;    // all three pairs < 4
};

CriteriaReport evaluate_all(const MomentState& m, double t, Sign sign = Sign::Plus);

}  // namespace tripent
