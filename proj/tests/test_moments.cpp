#include "tripent/moments.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace tripent;

TEST_CASE("classify_regime examples") {
  const Regime hyp = classify_regime({1.2, 1.0});
  CHECK(hyp.kind == RegimeKind::Hyperbolic);
  CHECK(hyp.rate == doctest::Approx(std::sqrt(0.44)).epsilon(1e-15));
  CHECK(hyp.rate == doctest::Approx(0.663325).epsilon(1e-6));

  const Regime per = classify_regime({1.0, 1.8});
  CHECK(per.kind == RegimeKind::Periodic);
  CHECK(per.rate == doctest::Approx(1.496663).epsilon(1e-6));

  const Regime deg = classify_regime({1.0, 1.0});
  CHECK(deg.kind == RegimeKind::Degenerate);
  CHECK(deg.rate == 0.0);
}

TEST_CASE("classify_regime tolerance band is relative") {
  CHECK(classify_regime({1.0 + 1e-10, 1.0}).kind == RegimeKind::Degenerate);
  CHECK(classify_regime({1.0 + 1e-8, 1.0}).kind == RegimeKind::Hyperbolic);
  CHECK(classify_regime({1.0, 1.0 + 1e-8}).kind == RegimeKind::Periodic);
  // Same relative gap at a different scale.
  CHECK(classify_regime({1e6 * (1.0 + 1e-10), 1e6}).kind == RegimeKind::Degenerate);
  CHECK(classify_regime({1.0 + 1e-10, 1.0}, 0.0).kind == RegimeKind::Hyperbolic);
  CHECK_THROWS_AS(classify_regime({1.0, 1.0}, -1.0), InvalidInput);
}

TEST_CASE("invalid couplings are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Couplings(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(Couplings(1.0, -2.0), InvalidInput);
  CHECK_THROWS_AS(Couplings(nan, 1.0), InvalidInput);
  CHECK_THROWS_AS(Couplings(1.0, inf), InvalidInput);
}

TEST_CASE("rate squared closes the triangle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.05, 5.0);
  for (int n = 0; n < 500; ++n) {
    const Couplings c(dist(rng), dist(rng));
    const Regime r = classify_regime(c);
    const double a = c.kappa1() * c.kappa1();
    const double b = c.kappa2() * c.kappa2();
    const double hi = std::max(a, b);
    CHECK(std::abs(r.rate * r.rate + std::min(a, b) - hi) <= 1e-12 * hi);
    if (r.kind != RegimeKind::Degenerate) {
      const long double k1 = c.kappa1(), k2 = c.kappa2();
      const long double exact = std::abs(k1 * k1 - k2 * k2);
      CHECK(std::abs(static_cast<long double>(r.rate) * r.rate - exact) <= 1e-14L * exact);
    }
  }
}

TEST_CASE("kappa_from_pump") {
  const Couplings c = kappa_from_pump({0.1, 0.1, 12.0, 10.0});
  CHECK(c.kappa1() == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(c.kappa2() == doctest::Approx(1.0).epsilon(1e-15));

  const Couplings unit = kappa_from_pump({1.0, 1.0, 1.0, 1.0});
  CHECK(unit.kappa1() == 1.0);
  CHECK(unit.kappa2() == 1.0);

  CHECK_THROWS_AS(kappa_from_pump({0.5, 1.0, 0.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(kappa_from_pump({-0.5, 1.0, 2.0, 1.0}), InvalidInput);
}

TEST_CASE("vacuum moments") {
  const MomentState v = vacuum_moments();
  CHECK(v.cx == Mat3::Identity());
  CHECK(v.cy == Mat3::Identity());
  CHECK(v.cx(0, 0) * v.cy(0, 0) == 1.0);
  CHECK(v.block(Quadrature::Y) == Mat3::Identity());
}
