#include "doctest.h"

#include "tmm/cli.hpp"
#include "tmm/errors.hpp"
#include "tmm/trajectory.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace tmm;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tmm_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string write_config(const std::string& dir, const std::string& body) {
  const fs::path p = fs::path(dir) / "config.txt";
  std::ofstream out(p);
  out << body;
  return p.string();
}

}  // namespace

TEST_CASE("presets configure the two published experiments") {
  ExperimentConfig a;
  apply_preset(a, "fig6a");
  CHECK(a.cost == "benchmark");
  CHECK(a.stepsize_scale == 1.0);
  CHECK(a.iterations == 50);
  CHECK(a.x0 == 3.0);
  REQUIRE(a.algorithms.size() == 3);
  CHECK(a.algorithms[0] == "tm");
  CHECK(a.algorithms[1] == "nag");
  CHECK(a.algorithms[2] == "gd");

  ExperimentConfig b;
  apply_preset(b, "fig6b");
  CHECK(b.stepsize_scale == 0.3);
  CHECK(b.iterations == 50);

  ExperimentConfig c;
  CHECK_THROWS_AS(apply_preset(c, "fig7"), ArgumentError);
}

TEST_CASE("config files parse keys, comments and inline presets") {
  const std::string dir = fresh_dir("config");
  const std::string path = write_config(dir,
                                        "# experiment setup\n"
                                        "preset = fig6b\n"
                                        "iterations = 12\n"
                                        "\n"
                                        "algorithms = tm, gd\n"
                                        "M = 0.5\n"
                                        "kappa_list = 2,5\n"
                                        "tolerance = 1e-5\n");
  ExperimentConfig cfg;
  load_config_file(cfg, path);
  CHECK(cfg.stepsize_scale == 0.3);  // from the preset line
  CHECK(cfg.iterations == 12);       // later lines override it
  REQUIRE(cfg.algorithms.size() == 2);
  CHECK(cfg.algorithms[0] == "tm");
  CHECK(cfg.algorithms[1] == "gd");
  CHECK(cfg.M == 0.5);
  REQUIRE(cfg.kappa_list.size() == 2);
  CHECK(cfg.kappa_list[0] == 2.0);
  CHECK(cfg.kappa_list[1] == 5.0);
  CHECK(cfg.tolerance == 1e-5);

  SUBCASE("unknown keys are named in the error") {
    const std::string bad = write_config(dir, "bogus_key = 1\n");
    ExperimentConfig c;
    try {
      load_config_file(c, bad);
      FAIL("expected ArgumentError");
    } catch (const ArgumentError& e) {
      CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
  }

  SUBCASE("malformed values and lines are rejected") {
    ExperimentConfig c;
    CHECK_THROWS_AS(load_config_file(c, write_config(dir, "iterations = abc\n")), ArgumentError);
    CHECK_THROWS_AS(load_config_file(c, write_config(dir, "just a line\n")), ArgumentError);
    CHECK_THROWS_AS(load_config_file(c, write_config(dir, "M = 1.5extra\n")), ArgumentError);
    CHECK_THROWS_AS(load_config_file(c, (fs::path(dir) / "missing.txt").string()), ArgumentError);
  }
}

TEST_CASE("make_cost builds each cost family") {
  ExperimentConfig cfg;
  const CostFunction bench = make_cost(cfg);
  CHECK(bench.dimension == 1);
  CHECK(bench.M == 0.038);
  CHECK(bench.L == 1.443);

  cfg.cost = "quadratic";
  cfg.dimension = 3;
  const CostFunction quad = make_cost(cfg);
  CHECK(quad.dimension == 3);
  CHECK(quad.M == 1.0);  // synthetic default when unset
  // The top of the synthetic spectrum comes through exp(log(10)), one ulp off 10.
  CHECK(quad.L == doctest::Approx(10.0).epsilon(1e-15));

  cfg.M = 0.5;
  cfg.L = 4.0;
  cfg.cost = "smoothed_abs";
  cfg.dimension = 2;
  const CostFunction smooth = make_cost(cfg);
  CHECK(smooth.dimension == 2);
  CHECK(smooth.M == 0.5);
  CHECK(smooth.L == 4.0);

  cfg.cost = "rosenbrock";
  CHECK_THROWS_AS(make_cost(cfg), ArgumentError);
}

TEST_CASE("simulate writes deterministic per-method tables") {
  ExperimentConfig cfg;
  apply_preset(cfg, "fig6a");
  cfg.out_dir = fresh_dir("sim_a");
  REQUIRE(cmd_simulate(cfg) == 0);

  for (const char* name : {"tm", "nag", "gd"}) {
    CAPTURE(name);
    const fs::path disc = fs::path(cfg.out_dir) / (std::string(name) + "_discrete.csv");
    const fs::path ode = fs::path(cfg.out_dir) / (std::string(name) + "_ode.csv");
    REQUIRE(fs::exists(disc));
    REQUIRE(fs::exists(ode));

    const auto lines = read_lines(disc);
    REQUIRE(lines.size() == 52);  // header + 51 samples
    CHECK(lines[0] == "k,t,f_error,grad_norm,output_0");
    CHECK(read_lines(ode)[0] == "t,f_error,grad_norm,V,Y_0,X_0");

    // Round-trip: every printed double parses back to the same string.
    const auto cells = split_csv(lines.back());
    REQUIRE(cells.size() == 5);
    for (std::size_t i = 1; i < cells.size(); ++i)
      CHECK(format_double(std::stod(cells[i])) == cells[i]);
  }

  const std::string combined = read_file(fs::path(cfg.out_dir) / "combined.csv");
  CHECK(combined.rfind("algorithm,mode,t,f_error\n", 0) == 0);
  CHECK(combined.find('\r') == std::string::npos);
  CHECK(combined.back() == '\n');

  // Final discrete errors reproduce the published ordering.
  const auto last_error = [&](const char* name) {
    const auto lines = read_lines(fs::path(cfg.out_dir) / (std::string(name) + "_discrete.csv"));
    return std::stod(split_csv(lines.back())[2]);
  };
  const double tm = last_error("tm"), nag = last_error("nag"), gd = last_error("gd");
  CHECK(tm < nag);
  CHECK(nag < gd);
  CHECK(tm < 1e-12);
  CHECK(gd > 1e-7);

  // Byte-identical on a second run.
  ExperimentConfig again = cfg;
  again.out_dir = fresh_dir("sim_b");
  REQUIRE(cmd_simulate(again) == 0);
  CHECK(read_file(fs::path(cfg.out_dir) / "combined.csv") ==
        read_file(fs::path(again.out_dir) / "combined.csv"));
  CHECK(read_file(fs::path(cfg.out_dir) / "tm_ode.csv") ==
        read_file(fs::path(again.out_dir) / "tm_ode.csv"));
}

TEST_CASE("reduced-stepsize simulation slows convergence but stays monotone") {
  ExperimentConfig full;
  apply_preset(full, "fig6a");
  full.out_dir = fresh_dir("sim_full");
  REQUIRE(cmd_simulate(full) == 0);

  ExperimentConfig reduced;
  apply_preset(reduced, "fig6b");
  reduced.out_dir = fresh_dir("sim_reduced");
  REQUIRE(cmd_simulate(reduced) == 0);

  for (const char* name : {"tm", "nag"}) {
    CAPTURE(name);
    const auto lines_full =
        read_lines(fs::path(full.out_dir) / (std::string(name) + "_discrete.csv"));
    const auto lines_red =
        read_lines(fs::path(reduced.out_dir) / (std::string(name) + "_discrete.csv"));
    const double final_full = std::stod(split_csv(lines_full.back())[2]);
    const double final_red = std::stod(split_csv(lines_red.back())[2]);
    CHECK(final_red > final_full);
    for (std::size_t i = 4; i + 1 < lines_red.size(); ++i) {
      const double cur = std::stod(split_csv(lines_red[i])[2]);
      const double next = std::stod(split_csv(lines_red[i + 1])[2]);
      CHECK(next <= cur * (1.0 + 1e-12) + 1e-18);
    }
  }
}

TEST_CASE("simulate honors a zero-iteration run and rejects bad configurations") {
  ExperimentConfig cfg;
  cfg.iterations = 0;
  cfg.algorithms = {"tm"};
  cfg.out_dir = fresh_dir("sim_zero");
  REQUIRE(cmd_simulate(cfg) == 0);
  CHECK(read_lines(fs::path(cfg.out_dir) / "tm_discrete.csv").size() == 2);
  CHECK(read_lines(fs::path(cfg.out_dir) / "tm_ode.csv").size() == 2);

  ExperimentConfig bad;
  bad.stepsize_scale = 0.0;
  bad.out_dir = fresh_dir("sim_bad");
  CHECK_THROWS_AS(cmd_simulate(bad), ArgumentError);
  bad.stepsize_scale = 1.5;
  CHECK_THROWS_AS(cmd_simulate(bad), ArgumentError);

  ExperimentConfig alg;
  alg.algorithms = {"tm", "sgd"};
  alg.out_dir = fresh_dir("sim_alg");
  CHECK_THROWS_AS(cmd_simulate(alg), ArgumentError);
}

TEST_CASE("rates tables expose the certified sweeps") {
  ExperimentConfig cfg;
  cfg.kappa_min = 1.0;
  cfg.kappa_max = 1e4;
  cfg.kappa_points = 25;
  cfg.out_dir = fresh_dir("rates");
  REQUIRE(cmd_rates(cfg) == 0);

  const auto mu_lines = read_lines(fs::path(cfg.out_dir) / "mu_bounds.csv");
  REQUIRE(mu_lines.size() == 26);
  CHECK(mu_lines[0] == "kappa,mu_over_L,mu_over_M");
  double max_ratio = 0.0;
  for (std::size_t i = 1; i < mu_lines.size(); ++i) {
    const auto cells = split_csv(mu_lines[i]);
    REQUIRE(cells.size() == 3);
    max_ratio = std::max(max_ratio, std::stod(cells[2]));
  }
  CHECK(max_ratio > 1.36);
  CHECK(max_ratio <= 1.3661 + 1e-3);

  const auto rate_lines = read_lines(fs::path(cfg.out_dir) / "rate_sweep.csv");
  REQUIRE(rate_lines.size() == 26);
  CHECK(rate_lines[0] == "kappa,p_tm_over_sqrtL,p_nag_over_sqrtL,phi_star_tm");
  const auto first = split_csv(rate_lines[1]);
  CHECK(std::stod(first[0]) == 1.0);
  CHECK(std::stod(first[1]) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::stod(first[2]) == doctest::Approx(3.0 / 7.0).epsilon(1e-9));
  for (std::size_t i = 1; i < rate_lines.size(); ++i) {
    const auto cells = split_csv(rate_lines[i]);
    CHECK(std::stod(cells[1]) >= std::stod(cells[2]) - 1e-12);
  }

  // The unscaled tuple dominates every rescaled variant at each kappa.
  const auto alpha_lines = read_lines(fs::path(cfg.out_dir) / "alpha_sweep.csv");
  CHECK(alpha_lines[0] == "kappa,alpha_scale,p_over_sqrtL");
  std::map<double, std::map<double, double>> by_kappa;
  for (std::size_t i = 1; i < alpha_lines.size(); ++i) {
    const auto cells = split_csv(alpha_lines[i]);
    REQUIRE(cells.size() == 3);
    by_kappa[std::stod(cells[0])][std::stod(cells[1])] = std::stod(cells[2]);
  }
  REQUIRE(by_kappa.size() == 25);
  for (const auto& [kappa, rows] : by_kappa) {
    CAPTURE(kappa);
    REQUIRE(rows.count(1.0) == 1);
    const double nominal = rows.at(1.0);
    for (const auto& [scale, rate] : rows) CHECK(rate <= nominal + 1e-12);
  }

  // Determinism, and a single-point grid.
  ExperimentConfig again = cfg;
  again.out_dir = fresh_dir("rates_b");
  REQUIRE(cmd_rates(again) == 0);
  CHECK(read_file(fs::path(cfg.out_dir) / "rate_sweep.csv") ==
        read_file(fs::path(again.out_dir) / "rate_sweep.csv"));

  ExperimentConfig single;
  single.kappa_points = 1;
  single.kappa_min = 7.0;
  single.kappa_max = 7.0;
  single.out_dir = fresh_dir("rates_single");
  REQUIRE(cmd_rates(single) == 0);
  CHECK(read_lines(fs::path(single.out_dir) / "rate_sweep.csv").size() == 2);
}

TEST_CASE("iqc table reports feasible and infeasible grid points") {
  ExperimentConfig cfg;
  cfg.M_list = {1.0};
  cfg.kappa_list = {2.0, 50.0};
  cfg.out_dir = fresh_dir("iqc");
  REQUIRE(cmd_iqc(cfg) == 0);

  const auto lines = read_lines(fs::path(cfg.out_dir) / "iqc.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "M,kappa,p_iqc_star,sigma,P11,P12,P22,status");

  const auto ok = split_csv(lines[1]);
  REQUIRE(ok.size() == 8);
  CHECK(ok[7] == "ok");
  CHECK(std::stod(ok[2]) >= 1.499495 - 5e-4);
  CHECK(std::stod(ok[4]) == 1.0);

  const auto gap = split_csv(lines[2]);
  CHECK(gap[7] == "infeasible_search");
  CHECK(gap[2] == "nan");

  ExperimentConfig again = cfg;
  again.out_dir = fresh_dir("iqc_b");
  REQUIRE(cmd_iqc(again) == 0);
  CHECK(read_file(fs::path(cfg.out_dir) / "iqc.csv") ==
        read_file(fs::path(again.out_dir) / "iqc.csv"));
}

TEST_CASE("certify writes a pass report and fails an inflated rate") {
  ExperimentConfig cfg;
  cfg.out_dir = fresh_dir("certify_pass");
  REQUIRE(cmd_certify(cfg) == 0);
  const std::string report = read_file(fs::path(cfg.out_dir) / "report.txt");
  CHECK(report.find("RESULT PASS") != std::string::npos);
  for (const char* name :
       {"exponential_envelope", "derivative_margin", "scaled_monotonicity", "value_bound"}) {
    CAPTURE(name);
    CHECK(report.find(std::string("PASS ") + name) != std::string::npos);
  }

  ExperimentConfig bad = cfg;
  bad.rate_scale = 2.0;
  bad.out_dir = fresh_dir("certify_fail");
  CHECK(cmd_certify(bad) == 1);
  const std::string failed = read_file(fs::path(bad.out_dir) / "report.txt");
  CHECK(failed.find("RESULT FAIL") != std::string::npos);
  CHECK(failed.find("FAIL ") != std::string::npos);

  // Starting at the minimizer passes on the absolute floors.
  ExperimentConfig still = cfg;
  still.x0 = 4.311994383740413;
  still.out_dir = fresh_dir("certify_eq");
  CHECK(cmd_certify(still) == 0);
}
