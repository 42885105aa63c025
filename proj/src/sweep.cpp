#include "tripent/sweep.hpp"

#include "tripent/propagator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tripent {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("config key '" + key + "': expected a number, got '" + value + "'");
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw UsageError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

struct Preset {
  double kappa1;
  double kappa2;
  const char* label;
};

constexpr Preset kHyperbolicPreset{1.2, 1.0, "hyperbolic"};
constexpr Preset kPeriodicPreset{1.0, 1.8, "periodic"};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SweepResult preset_sweep(const Preset& preset, const FigureOptions& options) {
  RunConfig cfg;
  cfg.kappa1 = preset.kappa1;
  cfg.kappa2 = preset.kappa2;
  cfg.tau_min = options.tau_min;
  cfg.tau_max = options.tau_max;
  cfg.points = options.points;
  cfg.tau_convention = options.tau_convention;
  cfg.sign = options.sign;
  return run_sweep(cfg);
}

void write_row(std::ostream& os, double tau, std::initializer_list<const std::array<double, 3>*> groups) {
  os << format_real(tau);
  for (const auto* g : groups) {
    for (const double v : *g) os << ',' << format_real(v);
  }
  os << '\n';
}

}  // namespace

std::string to_string(TauConvention c) { return c == TauConvention::RateTime ? "rate" : "maxkappa"; }

std::string to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

TauConvention parse_tau_convention(std::string_view text) {
  if (text == "rate") return TauConvention::RateTime;
  if (text == "maxkappa") return TauConvention::MaxKappaTime;
  throw UsageError("tau convention must be 'rate' or 'maxkappa', got '" + std::string(text) + "'");
}

Sign parse_sign(std::string_view text) {
  if (text == "plus") return Sign::Plus;
  if (text == "minus") return Sign::Minus;
  throw UsageError("sign must be 'plus' or 'minus', got '" + std::string(text) + "'");
}

void RunConfig::validate() const {
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) || kappa1 <= 0.0 || kappa2 <= 0.0) {
    throw UsageError("kappa1 and kappa2 must be finite and positive");
  }
  if (!std::isfinite(tau_min) || !std::isfinite(tau_max) || tau_min < 0.0) {
    throw UsageError("tau range must be finite with tau_min >= 0");
  }
  if (!(tau_max > tau_min)) throw UsageError("tau_max must exceed tau_min");
  if (points < 2) throw UsageError("points must be at least 2");
  if (mc_samples < 1) throw UsageError("mc_samples must be at least 1");
  if (rk4_steps < 1) throw UsageError("rk4_steps must be at least 1");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');

    if (key == "kappa1") {
      base.kappa1 = parse_double(key, value);
    } else if (key == "kappa2") {
      base.kappa2 = parse_double(key, value);
    } else if (key == "tau_min") {
      base.tau_min = parse_double(key, value);
    } else if (key == "tau_max") {
      base.tau_max = parse_double(key, value);
    } else if (key == "points") {
      base.points = parse_int<int>(key, value);
    } else if (key == "tau_convention") {
      base.tau_convention = parse_tau_convention(value);
    } else if (key == "sign") {
      base.sign = parse_sign(value);
    } else if (key == "seed") {
      base.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "mc_samples") {
      base.mc_samples = parse_int<std::int64_t>(key, value);
    } else if (key == "rk4_steps") {
      base.rk4_steps = parse_int<int>(key, value);
    } else if (key == "out") {
      base.out_path = value;
    } else {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

double time_for_tau(const Couplings& c, double tau, TauConvention convention) {
  if (convention == TauConvention::MaxKappaTime) return tau / std::max(c.kappa1(), c.kappa2());
  const Regime r = classify_regime(c);
  if (r.kind == RegimeKind::Degenerate) {
    throw UsageError("tau convention 'rate' is undefined for degenerate couplings; use --tau-convention maxkappa");
  }
  return tau / r.rate;
}

std::vector<double> tau_grid(double tau_min, double tau_max, int points) {
  std::vector<double> taus(static_cast<std::size_t>(points));
  const double step = (tau_max - tau_min) / (points - 1);
  for (int n = 0; n < points; ++n) taus[static_cast<std::size_t>(n)] = tau_min + n * step;
  taus.back() = tau_max;
  return taus;
}

MomentState sweep_moments(const Couplings& c, double t) {
  const bool degenerate = classify_regime(c).kind == RegimeKind::Degenerate;
  return moments_at(c, t, degenerate ? MomentMethod::Expm : MomentMethod::Analytic);
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Couplings c = cfg.couplings();
  SweepResult result;
  result.meta = {cfg.kappa1, cfg.kappa2, cfg.tau_convention, cfg.sign, classify_regime(c).kind};
  result.taus = tau_grid(cfg.tau_min, cfg.tau_max, cfg.points);
  result.reports.reserve(result.taus.size());
  for (const double tau : result.taus) {
    const double t = time_for_tau(c, tau, cfg.tau_convention);
    result.reports.push_back(evaluate_all(sweep_moments(c, t), t, cfg.sign));
  }
  return result;
}

std::string format_real(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  const SweepMeta& m = result.meta;
  os << "# kappa1=" << format_real(m.kappa1) << '\n'
     << "# kappa2=" << format_real(m.kappa2) << '\n'
     << "# regime=" << to_string(m.regime) << '\n'
     << "# tau_convention=" << to_string(m.tau_convention) << '\n'
     << "# sign=" << to_string(m.sign) << '\n';
  os << "tau,t,v12_raw,v13_raw,v23_raw,v12_opt,v13_opt,v23_opt,g1,g2,g3,obr1,obr2,obr3,obr23,obr13,obr12,"
        "vlf_tripartite,obr_single_tripartite,obr_pair_tripartite\n";
  for (std::size_t n = 0; n < result.taus.size(); ++n) {
    const CriteriaReport& r = result.reports[n];
    const std::array<double, 3> gains{r.gains.g1, r.gains.g2, r.gains.g3};
    os << format_real(result.taus[n]) << ',' << format_real(r.t);
    for (const auto* g : {&r.vlf_raw, &r.vlf_opt, &gains, &r.obr_single, &r.obr_pair}) {
      for (const double v : *g) os << ',' << format_real(v);
    }
    os << ',' << int{r.vlf_tripartite} << ',' << int{r.obr_single_tripartite} << ',' << int{r.obr_pair_tripartite}
       << '\n';
  }
}

void write_report(std::ostream& os, const CriteriaReport& r, double tau) {
  const auto line = [&os](const char* key, double v) { os << key << '=' << format_real(v) << '\n'; };
  line("tau", tau);
  line("t", r.t);
  os << "sign=" << to_string(r.sign) << '\n';
  line("v12_raw", r.vlf_raw[0]);
  line("v13_raw", r.vlf_raw[1]);
  line("v23_raw", r.vlf_raw[2]);
  line("v12_opt", r.vlf_opt[0]);
  line("v13_opt", r.vlf_opt[1]);
  line("v23_opt", r.vlf_opt[2]);
  line("g1", r.gains.g1);
  line("g2", r.gains.g2);
  line("g3", r.gains.g3);
  line("obr1", r.obr_single[0]);
  line("obr2", r.obr_single[1]);
  line("obr3", r.obr_single[2]);
  line("obr23", r.obr_pair[0]);
  line("obr13", r.obr_pair[1]);
  line("obr12", r.obr_pair[2]);
  os << "vlf_tripartite=" << (r.vlf_tripartite ? "true" : "false") << '\n'
     << "obr_single_tripartite=" << (r.obr_single_tripartite ? "true" : "false") << '\n'
     << "obr_pair_tripartite=" << (r.obr_pair_tripartite ? "true" : "false") << '\n';
}

std::string figure_header(int which) {
  switch (which) {
    case 1:
    case 2:
      return "tau,v12_raw,v13_raw,v23_raw,v12_opt,v13_opt,v23_opt";
    case 3:
      return "tau,obr1_hyperbolic,obr2_hyperbolic,obr3_hyperbolic,obr1_periodic,obr2_periodic,obr3_periodic";
    case 4:
    case 5:
      return "tau,obr23,obr13,obr12";
    default:
      throw UsageError("figure must be 1..5, got " + std::to_string(which));
  }
}

std::vector<std::filesystem::path> reproduce_figure(int which, const std::filesystem::path& out_dir,
                                                    const FigureOptions& options) {
  const std::string header = figure_header(which);
  {
    RunConfig probe;
    probe.tau_min = options.tau_min;
    probe.tau_max = options.tau_max;
    probe.points = options.points;
    probe.validate();
  }

  std::vector<Preset> presets;
  if (which == 1 || which == 4) presets = {kHyperbolicPreset};
  if (which == 2 || which == 5) presets = {kPeriodicPreset};
  if (which == 3) presets = {kHyperbolicPreset, kPeriodicPreset};

  std::vector<SweepResult> sweeps;
  for (const Preset& p : presets) sweeps.push_back(preset_sweep(p, options));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  const std::string stem = "fig" + std::to_string(which);
  const std::filesystem::path csv_path = out_dir / (stem + ".csv");
  const std::filesystem::path meta_path = out_dir / (stem + ".txt");

  {
    std::ofstream out = open_output(csv_path);
    out << "# figure=" << which << '\n' << "# tau_convention=" << to_string(options.tau_convention) << '\n';
    out << header << '\n';
    const std::vector<double>& taus = sweeps.front().taus;
    for (std::size_t n = 0; n < taus.size(); ++n) {
      const CriteriaReport& r = sweeps.front().reports[n];
      switch (which) {
        case 1:
        case 2:
          write_row(out, taus[n], {&r.vlf_raw, &r.vlf_opt});
          break;
        case 3:
          write_row(out, taus[n], {&r.obr_single, &sweeps.back().reports[n].obr_single});
          break;
        default:
          write_row(out, taus[n], {&r.obr_pair});
          break;
      }
    }
    finish_output(out, csv_path);
  }

  {
    std::ofstream out = open_output(meta_path);
    out << "figure=" << which << '\n';
    for (std::size_t n = 0; n < presets.size(); ++n) {
      const std::string prefix = presets.size() > 1 ? std::string(presets[n].label) + "." : "";
      out << prefix << "kappa1=" << format_real(presets[n].kappa1) << '\n'
          << prefix << "kappa2=" << format_real(presets[n].kappa2) << '\n'
          << prefix << "regime=" << to_string(sweeps[n].meta.regime) << '\n';
    }
    out << "tau_min=" << format_real(options.tau_min) << '\n'
        << "tau_max=" << format_real(options.tau_max) << '\n'
        << "points=" << options.points << '\n'
        << "tau_convention=" << to_string(options.tau_convention) << '\n'
        << "sign=" << to_string(options.sign) << '\n'
        << "columns=" << header << '\n';
    finish_output(out, meta_path);
  }
  return {csv_path, meta_path};
}

std::vector<OracleCheck> run_oracle_check(const RunConfig& cfg, const OracleOptions& options) {
  cfg.validate();
  const Couplings c = cfg.couplings();
  const bool degenerate = classify_regime(c).kind == RegimeKind::Degenerate;
  const std::vector<double> taus = tau_grid(cfg.tau_min, cfg.tau_max, cfg.points);

  OracleCheck closed{"closed_form_vs_expm", {}};
  OracleCheck propagated{"propagator_vs_expm", {}};
  OracleCheck rk4{"rk4_vs_analytic", {}};
  OracleCheck mc{"monte_carlo_vs_analytic", {}};
  OracleCheck symplectic{"symplectic_identity", {}};
  closed.report.tolerance = options.analytic_tol;
  propagated.report.tolerance = options.analytic_tol;
  rk4.report.tolerance = options.rk4_tol;
  mc.report.tolerance = options.mc_tol;
  symplectic.report.tolerance = 1e-10;

  // Monte-Carlo at mc_points evenly spread grid indices, the last one included.
  const int mc_points = std::max(0, options.mc_points);
  std::vector<bool> mc_at(taus.size(), false);
  for (int m = 1; m <= mc_points; ++m) {
    mc_at[static_cast<std::size_t>(std::lround(double(m) * double(taus.size() - 1) / mc_points))] = true;
  }
  for (std::size_t n = 0; n < taus.size(); ++n) {
    const double tau = taus[n];
    const double t = time_for_tau(c, tau, cfg.tau_convention);
    const PropagatorPair analytic = propagator_analytic(c, t);
    const MomentState reference = moments_at(c, t, MomentMethod::Expm);
    const MomentState from_propagator = moments_from(analytic);

    if (!degenerate) closed.report.merge(compare_moments(closed_form_moments(c, t), reference, options.analytic_tol, t));
    propagated.report.merge(compare_moments(from_propagator, reference, options.analytic_tol, t));

    const int steps = std::max(1, static_cast<int>(std::ceil(cfg.rk4_steps * tau)));
    rk4.report.merge(compare_moments(moments_from(rk4_propagator(c, t, steps)), from_propagator, options.rk4_tol, t));

    // mx my^T - I, reported through the X block.
    const PropagatorPair e = propagator_expm(c, t);
    for (const PropagatorPair* p : {&analytic, &e}) {
      const MomentState defect{p->mx * p->my.transpose(), Mat3::Identity()};
      symplectic.report.merge(compare_moments(defect, vacuum_moments(), 1e-10, t));
    }

    if (mc_at[n]) {
      mc.report.merge(compare_moments(mc_moments(c, t, cfg.mc_samples, cfg.seed + n), from_propagator, options.mc_tol, t));
    }
  }

  std::vector<OracleCheck> checks;
  if (!degenerate) checks.push_back(closed);
  checks.push_back(propagated);
  checks.push_back(rk4);
  checks.push_back(symplectic);
  if (mc_points > 0) checks.push_back(mc);
  return checks;
}

void write_oracle_checks(std::ostream& os, const std::vector<OracleCheck>& checks) {
  for (const OracleCheck& c : checks) {
    const WorstEntry& w = c.report.worst;
    os << (c.report.pass ? "PASS " : "FAIL ") << c.name << " max_abs_err=" << format_real(c.report.max_abs_err)
       << " max_rel_err=" << format_real(c.report.max_rel_err) << " tolerance=" << format_real(c.report.tolerance)
       << " worst=" << (w.block == Quadrature::X ? 'X' : 'Y') << '[' << w.i + 1 << "][" << w.j + 1
       << "]@t=" << format_real(w.t) << '\n';
  }
}

}  // namespace tripent
