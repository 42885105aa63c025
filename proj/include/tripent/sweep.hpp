#pragma once

// Parameter sweeps, figure-data reproduction and oracle cross-check runs,
// with deterministic CSV / key=value output.

#include "tripent/criteria.hpp"
#include "tripent/oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tripent {

/// Bad configuration or command-line usage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reading or writing files failed; distinct from computation errors.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How dimensionless time tau maps to t: tau = rate * t or tau = max(k1, k2) * t.
enum class TauConvention { RateTime, MaxKappaTime };

std::string to_string(TauConvention c);
std::string to_string(Sign s);
TauConvention parse_tau_convention(std::string_view text);
Sign parse_sign(std::string_view text);

struct RunConfig {
  double kappa1 = 1.2;
  double kappa2 = 1.0;
  double tau_min = 0.0;
  double tau_max = 3.0;
  int points = 301;
  TauConvention tau_convention = TauConvention::RateTime;
  Sign sign = Sign::Plus;
  std::uint64_t seed = 20060404;
  std::int64_t mc_samples = 1'000'000;
  // RK4 steps per unit of tau in oracle runs.
  int rk4_steps = 10'000;
  std::string out_path;

  /// Throws UsageError describing the first violated constraint.
  void validate() const;
  Couplings couplings() const { return {kappa1, kappa2}; }
};

/// Applies flat `key = value` lines ('#' starts a comment) on top of `base`.
/// Keys are the long flag names without dashes; '-' and '_' are interchangeable.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Physical time for a dimensionless tau. RateTime is undefined for
/// degenerate couplings (UsageError).
double time_for_tau(const Couplings& c, double tau, TauConvention convention);

/// tau_min + n (tau_max - tau_min) / (points - 1), n = 0 .. points-1.
std::vector<double> tau_grid(double tau_min, double tau_max, int points);

struct SweepMeta {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  TauConvention tau_convention = TauConvention::RateTime;
  Sign sign = Sign::Plus;
  RegimeKind regime = RegimeKind::Hyperbolic;
};

struct SweepResult {
  std::vector<double> taus;
  std::vector<CriteriaReport> reports;
  SweepMeta meta;
};

SweepResult run_sweep(const RunConfig& cfg);

/// Moments at one tau: analytic propagator, matrix exponential for degenerate couplings.
MomentState sweep_moments(const Couplings& c, double t);

/// Fixed 17-significant-digit decimal ("%.17g"); parses back bit-exactly.
std::string format_real(double value);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// One report as `key=value` lines.
void write_report(std::ostream& os, const CriteriaReport& report, double tau);

/// Figure presets. Figures 1, 3 (left) and 4 use k1 = 1.2, k2 = 1; figures
/// 2, 3 (right) and 5 use k1 = 1, k2 = 1.8.
struct FigureOptions {
  double tau_min = 0.0;
  double tau_max = 3.0;
  int points = 301;
  TauConvention tau_convention = TauConvention::RateTime;
  Sign sign = Sign::Plus;
};

/// Writes fig<which>.csv and fig<which>.txt (parameters) into out_dir and
/// returns both paths.
std::vector<std::filesystem::path> reproduce_figure(int which, const std::filesystem::path& out_dir,
                                                    const FigureOptions& options = {});

/// CSV header of figure `which`.
std::string figure_header(int which);

struct OracleCheck {
  std::string name;
  ComparisonReport report;
};

struct OracleOptions {
  double analytic_tol = 1e-9;
  double rk4_tol = 1e-8;
  double mc_tol = 1e-2;
  // Grid points (evenly spread, always including the last) that get a Monte-Carlo run.
  int mc_points = 3;
};

/// closed form vs expm, propagator moments vs expm, RK4 vs expm over the
/// config's tau grid, and Monte-Carlo vs expm at a few grid points.
std::vector<OracleCheck> run_oracle_check(const RunConfig& cfg, const OracleOptions& options = {});

void write_oracle_checks(std::ostream& os, const std::vector<OracleCheck>& checks);

}  // namespace tripent
