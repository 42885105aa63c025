#include "tripent/sweep.hpp"

#include <doctest.h>

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace tripent;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("tripent_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::string* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(
      "# fig 2 preset\n"
      "kappa1 = 1.0\n"
      "kappa2=1.8   # periodic\n"
      "tau-max = 2.5\n"
      "points=11\n"
      "tau_convention = maxkappa\n"
      "sign = minus\n"
      "seed = 12\n"
      "mc_samples = 1000\n"
      "out = data.csv\n");
  CHECK(cfg.kappa2 == 1.8);
  CHECK(cfg.tau_max == 2.5);
  CHECK(cfg.points == 11);
  CHECK(cfg.tau_convention == TauConvention::MaxKappaTime);
  CHECK(cfg.sign == Sign::Minus);
  CHECK(cfg.seed == 12);
  CHECK(cfg.mc_samples == 1000);
  CHECK(cfg.out_path == "data.csv");
  CHECK(cfg.tau_min == 0.0);  // untouched default

  CHECK_THROWS_AS(parse_config("kappa1\n"), UsageError);
  CHECK_THROWS_AS(parse_config("colour = red\n"), UsageError);
  CHECK_THROWS_AS(parse_config("points = 3.5\n"), UsageError);
  CHECK_THROWS_AS(parse_config("kappa1 = fast\n"), UsageError);
  CHECK_THROWS_AS(parse_config("sign = both\n"), UsageError);
  CHECK_THROWS_AS(load_config("/nonexistent/tripent.cfg"), IoError);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.points = 1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.tau_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.kappa1 = -1.0;
  CHECK_THROWS_AS(run_sweep(cfg), UsageError);
}

TEST_CASE("tau conventions") {
  const Couplings c(1.2, 1.0);
  CHECK(time_for_tau(c, 1.0, TauConvention::RateTime) == doctest::Approx(1.0 / std::sqrt(0.44)));
  CHECK(time_for_tau(c, 1.2, TauConvention::MaxKappaTime) == doctest::Approx(1.0));
  CHECK_THROWS_AS(time_for_tau({1.0, 1.0}, 1.0, TauConvention::RateTime), UsageError);
  CHECK(time_for_tau({1.0, 1.0}, 2.0, TauConvention::MaxKappaTime) == 2.0);

  const auto grid = tau_grid(0.0, 3.0, 301);
  CHECK(grid.size() == 301);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 3.0);
  for (std::size_t n = 1; n < grid.size(); ++n) CHECK(grid[n] > grid[n - 1]);
}

TEST_CASE("sweep starts at the vacuum boundary") {
  RunConfig cfg;
  cfg.points = 21;
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.reports.size() == r.taus.size());
  const CriteriaReport& first = r.reports.front();
  for (int n = 0; n < 3; ++n) {
    CHECK(first.vlf_opt[n] == 4.0);
    CHECK(first.obr_single[n] == 1.0);
    CHECK(first.obr_pair[n] == 4.0);
  }
  CHECK(r.meta.regime == RegimeKind::Hyperbolic);
}

TEST_CASE("degenerate sweep uses the matrix exponential") {
  RunConfig cfg;
  cfg.kappa1 = cfg.kappa2 = 1.0;
  cfg.points = 5;
  CHECK_THROWS_AS(run_sweep(cfg), UsageError);
  cfg.tau_convention = TauConvention::MaxKappaTime;
  const SweepResult r = run_sweep(cfg);
  CHECK(r.meta.regime == RegimeKind::Degenerate);
  CHECK(r.reports.back().obr_pair_tripartite);
}

TEST_CASE("fig1 preset: optimised VLF dips below 4") {
  RunConfig cfg;
  const SweepResult r = run_sweep(cfg);
  bool dipped = false;
  for (const auto& rep : r.reports) dipped = dipped || rep.vlf_opt[0] < 4.0;
  CHECK(dipped);
}

TEST_CASE("fig3 right preset: only OBR1 drops below 1") {
  RunConfig cfg;
  cfg.kappa1 = 1.0;
  cfg.kappa2 = 1.8;
  const SweepResult r = run_sweep(cfg);
  bool below = false;
  for (const auto& rep : r.reports) {
    below = below || rep.obr_single[0] < 1.0;
    CHECK(rep.obr_single[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.obr_single[2] == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(below);
}

TEST_CASE("format_real round-trips bit-exactly") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::uint64_t> bits;
  int tested = 0;
  while (tested < 2000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    ++tested;
    const std::string text = format_real(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
  CHECK(format_real(4.0) == "4");
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("sweep csv schema and round trip") {
  RunConfig cfg;
  cfg.points = 7;
  const SweepResult r = run_sweep(cfg);
  std::ostringstream os;
  write_sweep_csv(os, r);
  const std::string text = os.str();
  CHECK(text.find("# tau_convention=rate") != std::string::npos);
  CHECK(text.find("tau,t,v12_raw,v13_raw,v23_raw,v12_opt,v13_opt,v23_opt,g1,g2,g3,obr1,obr2,obr3,obr23,obr13,obr12,") !=
        std::string::npos);

  const auto dir = scratch_dir("sweep");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "s.csv") << text;
  const auto rows = read_csv(dir / "s.csv");
  REQUIRE(rows.size() == 7);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    CHECK(rows[n][0] == r.taus[n]);
    CHECK(rows[n][2] == r.reports[n].vlf_raw[0]);
    CHECK(rows[n][16] == r.reports[n].obr_pair[2]);
  }
}

TEST_CASE("report lines") {
  RunConfig cfg;
  const SweepResult r = run_sweep(cfg);
  std::ostringstream os;
  write_report(os, r.reports[100], r.taus[100]);
  const std::string text = os.str();
  CHECK(text.rfind("tau=1\n", 0) == 0);
  CHECK(text.find("obr_pair_tripartite=true") != std::string::npos);
  CHECK(text.find("sign=plus") != std::string::npos);
}

TEST_CASE("figure files") {
  const auto dir = scratch_dir("figures");
  const auto paths = reproduce_figure(1, dir);
  REQUIRE(paths.size() == 2);
  std::string header;
  const auto rows = read_csv(paths[0], &header);
  CHECK(header == "tau,v12_raw,v13_raw,v23_raw,v12_opt,v13_opt,v23_opt");
  CHECK(rows.size() == 301);
  CHECK(slurp(paths[1]).find("tau_convention=rate") != std::string::npos);

  const auto fig4 = reproduce_figure(4, dir);
  for (const auto& row : read_csv(fig4[0])) {
    if (row[0] <= 0.0) continue;
    for (int c = 1; c <= 3; ++c) CHECK(row[c] < 4.0);
  }

  const auto fig3 = reproduce_figure(3, dir);
  for (const auto& row : read_csv(fig3[0], &header)) {
    for (const int c : {2, 3, 5, 6}) CHECK(std::abs(row[c] - 1.0) <= 1e-10);
  }
  CHECK(header == "tau,obr1_hyperbolic,obr2_hyperbolic,obr3_hyperbolic,obr1_periodic,obr2_periodic,obr3_periodic");

  CHECK_THROWS_AS(reproduce_figure(6, dir), UsageError);
  CHECK_THROWS_AS(reproduce_figure(1, "/proc/tripent_cannot_write"), IoError);
}

TEST_CASE("oracle check run") {
  RunConfig cfg;
  cfg.points = 31;
  cfg.mc_samples = 200'000;
  const auto checks = run_oracle_check(cfg);
  REQUIRE(checks.size() == 5);
  for (const auto& c : checks) {
    INFO(c.name << " " << c.report.max_rel_err);
    CHECK(c.report.pass);
  }

  cfg.rk4_steps = 10;
  bool rk4_failed = false;
  for (const auto& c : run_oracle_check(cfg, {.mc_points = 0})) {
    if (c.name == "rk4_vs_analytic") rk4_failed = !c.report.pass;
  }
  CHECK(rk4_failed);

  std::ostringstream os;
  write_oracle_checks(os, checks);
  CHECK(os.str().find("PASS closed_form_vs_expm") != std::string::npos);
}
