// Command-line front end: sweeps, figure data, oracle cross-checks, single-point evaluation.
//
// Exit status: 0 success, 1 an oracle comparison failed, 2 usage error,
// 3 I/O error, 4 computation error.

#include "tripent/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOracleFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCompute = 4;

struct Flags {
  double kappa1 = 0, kappa2 = 0, tau_min = 0, tau_max = 0, tau = 0;
  int points = 0, rk4_steps = 0;
  std::string tau_convention, sign, out, config;
  std::uint64_t seed = 0;
  std::int64_t mc_samples = 0;
  std::vector<int> which;

  CLI::Option* o_kappa1 = nullptr;
  CLI::Option* o_kappa2 = nullptr;
  CLI::Option* o_tau_min = nullptr;
  CLI::Option* o_tau_max = nullptr;
  CLI::Option* o_points = nullptr;
  CLI::Option* o_tau_convention = nullptr;
  CLI::Option* o_sign = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_mc_samples = nullptr;
  CLI::Option* o_rk4_steps = nullptr;
  CLI::Option* o_out = nullptr;
};

void add_common(CLI::App& cmd, Flags& f) {
  f.o_kappa1 = cmd.add_option("--kappa1", f.kappa1, "coupling kappa1 = chi1 <a4(0)>");
  f.o_kappa2 = cmd.add_option("--kappa2", f.kappa2, "coupling kappa2 = chi2 <a5(0)>");
  f.o_tau_min = cmd.add_option("--tau-min", f.tau_min, "first dimensionless time");
  f.o_tau_max = cmd.add_option("--tau-max", f.tau_max, "last dimensionless time");
  f.o_points = cmd.add_option("--points", f.points, "grid points (>= 2)");
  f.o_tau_convention = cmd.add_option("--tau-convention", f.tau_convention, "rate: tau = rate*t, maxkappa: tau = max(k1,k2)*t")
                           ->check(CLI::IsMember({"rate", "maxkappa"}));
  f.o_sign = cmd.add_option("--sign", f.sign, "combination sign for the EPR criteria")->check(CLI::IsMember({"plus", "minus"}));
  f.o_seed = cmd.add_option("--seed", f.seed, "Monte-Carlo seed");
  f.o_mc_samples = cmd.add_option("--mc-samples", f.mc_samples, "Monte-Carlo sample count");
  f.o_out = cmd.add_option("--out", f.out, "output file (sweep) or directory (figures); stdout when empty");
  cmd.add_option("--config", f.config, "flat key=value config file; flags override it");
}

tripent::RunConfig resolve(const Flags& f, tripent::RunConfig cfg) {
  if (!f.config.empty()) cfg = tripent::load_config(f.config, cfg);
  if (f.o_kappa1->count()) cfg.kappa1 = f.kappa1;
  if (f.o_kappa2->count()) cfg.kappa2 = f.kappa2;
  if (f.o_tau_min && f.o_tau_min->count()) cfg.tau_min = f.tau_min;
  if (f.o_tau_max && f.o_tau_max->count()) cfg.tau_max = f.tau_max;
  if (f.o_points && f.o_points->count()) cfg.points = f.points;
  if (f.o_tau_convention->count()) cfg.tau_convention = tripent::parse_tau_convention(f.tau_convention);
  if (f.o_sign->count()) cfg.sign = tripent::parse_sign(f.sign);
  if (f.o_seed->count()) cfg.seed = f.seed;
  if (f.o_mc_samples->count()) cfg.mc_samples = f.mc_samples;
  if (f.o_rk4_steps && f.o_rk4_steps->count()) cfg.rk4_steps = f.rk4_steps;
  if (f.o_out->count()) cfg.out_path = f.out;
  return cfg;
}

template <typename Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tripent::IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw tripent::IoError("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature moments and tripartite entanglement criteria for interlinked chi(2) interactions"};
  app.require_subcommand(1);

  Flags sweep_flags, figure_flags, oracle_flags, eval_flags;

  CLI::App* sweep = app.add_subcommand("sweep", "evaluate all criteria on a uniform tau grid, CSV output");
  add_common(*sweep, sweep_flags);

  CLI::App* figures = app.add_subcommand("figures", "write figure data (fig<N>.csv + fig<N>.txt) for the presets");
  add_common(*figures, figure_flags);
  figures->add_option("--which", figure_flags.which, "figure numbers 1..5 (default: all)")
      ->check(CLI::Range(1, 5));

  CLI::App* oracle = app.add_subcommand("oracle", "cross-check closed forms against expm, RK4 and Monte-Carlo");
  add_common(*oracle, oracle_flags);
  oracle_flags.o_rk4_steps =
      oracle->add_option("--rk4-steps", oracle_flags.rk4_steps, "RK4 steps per unit tau (default 10000)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate all criteria at one tau, key=value output");
  add_common(*eval, eval_flags);
  eval->add_option("--tau", eval_flags.tau, "dimensionless time")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sweep->parsed()) {
      const tripent::RunConfig cfg = resolve(sweep_flags, {});
      const tripent::SweepResult result = tripent::run_sweep(cfg);
      emit(cfg.out_path, [&](std::ostream& os) { tripent::write_sweep_csv(os, result); });
    } else if (figures->parsed()) {
      const tripent::RunConfig cfg = resolve(figure_flags, {});
      cfg.validate();
      tripent::FigureOptions options{cfg.tau_min, cfg.tau_max, cfg.points, cfg.tau_convention, cfg.sign};
      std::vector<int> which = figure_flags.which;
      if (which.empty()) which = {1, 2, 3, 4, 5};
      const std::string dir = cfg.out_path.empty() ? "figures" : cfg.out_path;
      for (const int w : which) {
        for (const auto& path : tripent::reproduce_figure(w, dir, options)) std::cout << path.string() << '\n';
      }
    } else if (oracle->parsed()) {
      const tripent::RunConfig cfg = resolve(oracle_flags, {});
      const auto checks = tripent::run_oracle_check(cfg);
      emit(cfg.out_path, [&](std::ostream& os) { tripent::write_oracle_checks(os, checks); });
      for (const auto& c : checks) {
        if (!c.report.pass) return kExitOracleFailed;
      }
    } else if (eval->parsed()) {
      const tripent::RunConfig cfg = resolve(eval_flags, {});
      cfg.validate();
      if (!(eval_flags.tau >= 0.0)) throw tripent::UsageError("--tau must be non-negative");
      const tripent::Couplings c = cfg.couplings();
      const double t = tripent::time_for_tau(c, eval_flags.tau, cfg.tau_convention);
      const auto report = tripent::evaluate_all(tripent::sweep_moments(c, t), t, cfg.sign);
      emit(cfg.out_path, [&](std::ostream& os) { tripent::write_report(os, report, eval_flags.tau); });
    }
  } catch (const tripent::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tripent::InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tripent::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return 0;
}
