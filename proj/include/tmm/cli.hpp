#pragma once

#include "tmm/cost_function.hpp"

#include <string>
#include <vector>

namespace tmm {

/// Settings shared by all subcommands. Zero-valued numeric fields mean "use
/// the per-command default" (documented on each cmd_*); list fields carry
/// their own defaults.
struct ExperimentConfig {
  std::string cost = "benchmark";  ///< benchmark | quadratic | smoothed_abs
  std::vector<std::string> algorithms = {"tm", "nag", "gd"};
  int dimension = 1;     ///< coordinate count for the synthetic costs
  double M = 0, L = 0;   ///< 0 = use the selected cost's own constants
  double stepsize_scale = 1.0;  ///< multiplies the base stepsize; must lie in (0, 1]
  double dt = 0;                ///< integrator step; 0 = 0.01 / sqrt(L)
  double t_end = 0;             ///< horizon; 0 = iterations x per-method time unit
  long iterations = 50;
  double x0 = 3.0;  ///< start value, replicated across coordinates
  std::string out_dir = "out";
  unsigned long seed = 1;  ///< recorded for reproducibility; every command is deterministic
  double rate_scale = 1.0;  ///< certify only: multiplies the certified rate (negative control)
  double kappa_min = 1.0, kappa_max = 1e6;
  int kappa_points = 200;
  std::vector<double> M_list = {0.01, 0.1, 1.0};
  std::vector<double> kappa_list = {2, 5, 10, 50, 100};
  double tolerance = 0;  ///< bisection tolerance; 0 = solver default
};

/// Named experiment setups: "fig6a" (benchmark cost, full stepsize, all three
/// methods) and "fig6b" (the same with stepsize_scale = 0.3).
/// Throws ArgumentError for an unknown name.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

/// Reads a flat `key = value` file into cfg ('#' starts a comment; blank
/// lines skipped; a `preset` line is applied where it appears). Throws
/// ArgumentError naming the offending key or line on any problem.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// Builds the configured cost. benchmark ignores dimension (it is scalar);
/// quadratic uses a log-spaced diagonal spectrum from M to L; M/L default to
/// 1 and 10 for the synthetic costs when unset.
CostFunction make_cost(const ExperimentConfig& cfg);

/// Runs the configured algorithms in both discrete and continuous form over a
/// shared time horizon. Writes <algo>_discrete.csv / <algo>_ode.csv plus a
/// combined long-format combined.csv into out_dir. Returns 0 on success, 1
/// when a run diverges (message on stderr).
int cmd_simulate(const ExperimentConfig& cfg);

/// Writes mu_bounds.csv, rate_sweep.csv and alpha_sweep.csv over the
/// configured kappa grid at fixed L (default 1). Returns 0.
int cmd_rates(const ExperimentConfig& cfg);

/// Runs the LMI feasibility bisection over M_list x kappa_list and writes
/// iqc.csv. Returns 0; grid points with no certificate are rows with
/// status=infeasible_search, not failures.
int cmd_iqc(const ExperimentConfig& cfg);

/// Integrates the momentum model from the output-anchored start, checks the
/// certified exponential decay, and writes report.txt with per-check margins.
/// Defaults: t_end = 200/sqrt(L), dt = 0.01/sqrt(L). Returns 0 when every
/// check passes, 1 otherwise.
int cmd_certify(const ExperimentConfig& cfg);

}  // namespace tmm
