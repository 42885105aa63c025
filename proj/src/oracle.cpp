#include "tripent/oracle.hpp"

#include "tripent/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace tripent {
namespace {

Mat3 rk4(const Mat3& a, double t, int steps) {
  const double h = t / steps;
  Mat3 m = Mat3::Identity();
  for (int s = 0; s < steps; ++s) {
    const Mat3 k1 = a * m;
    const Mat3 k2 = a * (m + 0.5 * h * k1);
    const Mat3 k3 = a * (m + 0.5 * h * k2);
    const Mat3 k4 = a * (m + h * k3);
    m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return m;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Accumulator {
  Mat3 xx = Mat3::Zero();
  Mat3 yy = Mat3::Zero();
};

Accumulator sample_block(const PropagatorPair& p, std::int64_t count, std::uint64_t seed, std::uint64_t block) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(block)));
  std::normal_distribution<double> normal(0.0, 1.0);
  Accumulator acc;
  for (std::int64_t n = 0; n < count; ++n) {
    const Vec3 x0(normal(rng), normal(rng), normal(rng));
    const Vec3 y0(normal(rng), normal(rng), normal(rng));
    const Vec3 x = p.mx * x0;
    const Vec3 y = p.my * y0;
    acc.xx.noalias() += x * x.transpose();
    acc.yy.noalias() += y * y.transpose();
  }
  return acc;
}

}  // namespace

PropagatorPair rk4_propagator(const Couplings& c, double t, int steps) {
  if (steps < 1) throw InvalidInput("RK4 needs at least one step");
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("time must be finite and non-negative");
  const DriftPair d = drift_matrices(c);
  return {rk4(d.ax, t, steps), rk4(d.ay, t, steps), t};
}

MomentState mc_moments(const Couplings& c, double t, std::int64_t n, std::uint64_t seed, unsigned workers) {
  if (n < 1) throw InvalidInput("Monte-Carlo needs at least one sample");
  const PropagatorPair p = propagator_expm(c, t);

  const std::int64_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Accumulator> partial(static_cast<std::size_t>(blocks));
  const auto run_block = [&](std::int64_t b) {
    const std::int64_t count = std::min(kMcBlockSize, n - b * kMcBlockSize);
    partial[static_cast<std::size_t>(b)] = sample_block(p, count, seed, static_cast<std::uint64_t>(b));
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
  }

  // Reduce in block order so the sum is independent of the worker count.
  Accumulator total;
  for (const Accumulator& a : partial) {
    total.xx += a.xx;
    total.yy += a.yy;
  }
  const double scale = 1.0 / static_cast<double>(n);
  MomentState m{total.xx * scale, total.yy * scale};
  return m;
}

void ComparisonReport::merge(const ComparisonReport& other) {
  max_abs_err = std::max(max_abs_err, other.max_abs_err);
  if (other.max_rel_err > max_rel_err) {
    max_rel_err = other.max_rel_err;
    worst = other.worst;
  }
  pass = pass && other.pass;
}

ComparisonReport compare_moments(const MomentState& a, const MomentState& b, double tol, double t) {
  ComparisonReport r;
  r.tolerance = tol;
  r.worst.t = t;
  for (const Quadrature q : {Quadrature::X, Quadrature::Y}) {
    const Mat3& ma = a.block(q);
    const Mat3& mb = b.block(q);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double abs_err = std::abs(ma(i, j) - mb(i, j));
        // NaN in either input must fail the comparison.
        if (!std::isfinite(abs_err)) abs_err = std::numeric_limits<double>::infinity();
        const double rel_err = std::isinf(abs_err) ? abs_err : abs_err / std::max(1.0, std::abs(mb(i, j)));
        r.max_abs_err = std::max(r.max_abs_err, abs_err);
        if (rel_err > r.max_rel_err) {
          r.max_rel_err = rel_err;
          r.worst = {q, i, j, t};
        }
      }
    }
  }
  r.pass = r.max_rel_err <= tol;
  return r;
}

}  // namespace tripent
