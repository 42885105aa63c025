#include "tripent/criteria.hpp"

#include <algorithm>
#include <string>

namespace tripent {
namespace {

Vec3 unit(Mode i) { return Vec3::Unit(i.index()); }

// The two modes other than i, in ascending order.
std::pair<Mode, Mode> others(Mode i) {
  switch (i.index()) {
    case 0:
      return {Mode(2), Mode(3)};
    case 1:
      return {Mode(1), Mode(3)};
    default:
      return {Mode(1), Mode(2)};
  }
}

Mode remaining(Mode j, Mode k) { return Mode(6 - j.number() - k.number()); }

// Residual variance of `target` after the best linear estimate from `source`.
double infer(const Mat3& c, const Vec3& target, const Vec3& source) {
  const double var_target = target.dot(c * target);
  const double var_source = source.dot(c * source);
  if (var_source < kMinInferenceDenominator) return var_target;
  const double cov = target.dot(c * source);
  return std::max(0.0, var_target - cov * cov / var_source);
}

}  // namespace

Mode::Mode(int number) : number_(number) {
  if (number < 1 || number > 3) {
    throw InvalidInput("mode must be 1, 2 or 3, got " + std::to_string(number));
  }
}

QuadCombo::QuadCombo(Quadrature quad, const Vec3& weights) : quad_(quad), weights_(weights) {
  if (!weights.allFinite() || weights.isZero(0.0)) {
    throw InvalidInput("quadrature combination needs finite weights, at least one nonzero");
  }
}

double combo_variance(const MomentState& m, const QuadCombo& a) {
  const Vec3& w = a.weights();
  return std::max(0.0, w.dot(m.block(a.quad()) * w));
}

double combo_covariance(const MomentState& m, const QuadCombo& a, const QuadCombo& b) {
  if (a.quad() != b.quad()) {
    throw UnsupportedCombination("X-Y cross covariances are not represented (they vanish for this system)");
  }
  return a.weights().dot(m.block(a.quad()) * b.weights());
}

double inferred_variance_single(const MomentState& m, Quadrature quad, Mode i, Sign sign) {
  const auto [j, k] = others(i);
  return infer(m.block(quad), unit(i), unit(j) + sign_value(sign) * unit(k));
}

double obr_single(const MomentState& m, Mode i, Sign sign) {
  return inferred_variance_single(m, Quadrature::X, i, sign) * inferred_variance_single(m, Quadrature::Y, i, sign);
}

double inferred_variance_pair(const MomentState& m, Quadrature quad, Mode j, Mode k, Sign sign) {
  if (j == k) throw InvalidInput("pair inference needs two distinct modes");
  return infer(m.block(quad), unit(j) + sign_value(sign) * unit(k), unit(remaining(j, k)));
}

double obr_pair(const MomentState& m, Mode j, Mode k, Sign sign) {
  return inferred_variance_pair(m, Quadrature::X, j, k, sign) * inferred_variance_pair(m, Quadrature::Y, j, k, sign);
}

VlfGains vlf_gains(const MomentState& m) {
  const Mat3& y = m.cy;
  // "0.0 -" keeps vacuum gains at +0.
  return {0.0 - (y(0, 1) + y(0, 2)) / y(0, 0), 0.0 - (y(0, 1) + y(1, 2)) / y(1, 1), 0.0 - (y(0, 2) + y(1, 2)) / y(2, 2)};
}

double vlf_value(const MomentState& m, Mode i, Mode j, const VlfGains& gains) {
  if (i == j) throw InvalidInput("VLF sums are defined for distinct mode pairs");
  const Mode k = remaining(i, j);
  const Vec3 x_diff = unit(i) - unit(j);
  const Vec3 y_sum = unit(i) + unit(j) + gains[k.index()] * unit(k);
  return combo_variance(m, QuadCombo(Quadrature::X, x_diff)) + combo_variance(m, QuadCombo(Quadrature::Y, y_sum));
}

CriteriaReport evaluate_all(const MomentState& m, double t, Sign sign) {
  CriteriaReport r;
  r.t = t;
  r.sign = sign;
  r.gains = vlf_gains(m);

  const std::array<std::pair<int, int>, 3> vlf_pairs{{{1, 2}, {1, 3}, {2, 3}}};
  const std::array<std::pair<int, int>, 3> obr_pairs{{{2, 3}, {1, 3}, {1, 2}}};
  for (std::size_t n = 0; n < 3; ++n) {
    const Mode i(vlf_pairs[n].first), j(vlf_pairs[n].second);
    r.vlf_raw[n] = vlf_value(m, i, j, kUnitGains);
    r.vlf_opt[n] = vlf_value(m, i, j, r.gains);
    r.obr_single[n] = obr_single(m, Mode(static_cast<int>(n) + 1), sign);
    r.obr_pair[n] = obr_pair(m, Mode(obr_pairs[n].first), Mode(obr_pairs[n].second), sign);
  }

  const auto below = [](const std::array<double, 3>& v, double bound) {
    const double limit = bound * (1.0 - kFlagMargin);
    return std::count_if(v.begin(), v.end(), [limit](double x) { return x < limit; });
  };
  r.vlf_tripartite = below(r.vlf_opt, 4.0) >= 2;
  r.obr_single_tripartite = below(r.obr_single, 1.0) == 3;
  r.obr_pair_tripartite = below(r.obr_pair, 4.0) == 3;
  return r;
}

}  // namespace tripent
