#include "CLI11.hpp"

#include "tmm/cli.hpp"

#include <exception>
#include <iostream>
#include <string>

namespace {

struct Staged {
  tmm::ExperimentConfig v;
  std::string config_path, preset;
};

// Applies only the flags the user actually passed, so precedence is
// defaults < config file < preset < explicit flags.
tmm::ExperimentConfig resolve(const CLI::App& sub, const Staged& staged) {
  tmm::ExperimentConfig cfg;
  const auto passed = [&sub](const std::string& name) {
    const CLI::Option* o = sub.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (passed("--config")) tmm::load_config_file(cfg, staged.config_path);
  if (passed("--preset")) tmm::apply_preset(cfg, staged.preset);
  if (passed("--out")) cfg.out_dir = staged.v.out_dir;
  if (passed("--seed")) cfg.seed = staged.v.seed;
  if (passed("--dt")) cfg.dt = staged.v.dt;
  if (passed("--t-end")) cfg.t_end = staged.v.t_end;
  if (passed("--scale")) cfg.stepsize_scale = staged.v.stepsize_scale;
  if (passed("--cost")) cfg.cost = staged.v.cost;
  if (passed("--dimension")) cfg.dimension = staged.v.dimension;
  if (passed("--M")) cfg.M = staged.v.M;
  if (passed("--L")) cfg.L = staged.v.L;
  if (passed("--iterations")) cfg.iterations = staged.v.iterations;
  if (passed("--x0")) cfg.x0 = staged.v.x0;
  if (passed("--algorithms")) cfg.algorithms = staged.v.algorithms;
  if (passed("--rate-scale")) cfg.rate_scale = staged.v.rate_scale;
  if (passed("--kappa-min")) cfg.kappa_min = staged.v.kappa_min;
  if (passed("--kappa-max")) cfg.kappa_max = staged.v.kappa_max;
  if (passed("--kappa-points")) cfg.kappa_points = staged.v.kappa_points;
  if (passed("--M-list")) cfg.M_list = staged.v.M_list;
  if (passed("--kappa-list")) cfg.kappa_list = staged.v.kappa_list;
  if (passed("--tolerance")) cfg.tolerance = staged.v.tolerance;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple-momentum toolkit: simulation, Lyapunov rate certificates, LMI feasibility"};
  app.require_subcommand(1);

  Staged staged;
  int exit_code = 0;

  const auto add_common = [&staged](CLI::App* sub) {
    sub->add_option("--config", staged.config_path, "flat key = value settings file");
    sub->add_option("--out", staged.v.out_dir, "output directory");
    sub->add_option("--seed", staged.v.seed, "recorded seed (every command is deterministic)");
    sub->add_option("--dt", staged.v.dt, "integrator stepsize, default 0.01/sqrt(L)");
    sub->add_option("--t-end", staged.v.t_end, "integration horizon, default matches the discrete run");
    sub->add_option("--scale", staged.v.stepsize_scale, "stepsize scale in (0, 1]");
    sub->add_option("--preset", staged.preset, "fig6a | fig6b");
    return sub;
  };

  CLI::App* simulate =
      add_common(app.add_subcommand("simulate", "discrete runs plus their continuous models"));
  simulate->add_option("--iterations", staged.v.iterations, "discrete step count");
  simulate->add_option("--x0", staged.v.x0, "start value (all coordinates)");
  simulate->add_option("--algorithms", staged.v.algorithms, "comma list from tm,nag,gd")
      ->delimiter(',');
  simulate->add_option("--cost", staged.v.cost, "benchmark | quadratic | smoothed_abs");
  simulate->add_option("--dimension", staged.v.dimension, "coordinate count for synthetic costs");
  simulate->add_option("--M", staged.v.M, "strong-convexity constant override");
  simulate->add_option("--L", staged.v.L, "gradient Lipschitz constant override");

  CLI::App* rates =
      add_common(app.add_subcommand("rates", "certified-rate tables over a kappa grid"));
  rates->add_option("--kappa-min", staged.v.kappa_min, "grid start");
  rates->add_option("--kappa-max", staged.v.kappa_max, "grid end");
  rates->add_option("--kappa-points", staged.v.kappa_points, "grid size");
  rates->add_option("--L", staged.v.L, "Lipschitz constant (default 1)");

  CLI::App* iqc = add_common(app.add_subcommand("iqc", "LMI feasibility rates over M x kappa"));
  iqc->add_option("--M-list", staged.v.M_list, "comma list of M values")->delimiter(',');
  iqc->add_option("--kappa-list", staged.v.kappa_list, "comma list of condition numbers")
      ->delimiter(',');
  iqc->add_option("--tolerance", staged.v.tolerance, "bisection tolerance, default 1e-4*sqrt(L)");

  CLI::App* certify =
      add_common(app.add_subcommand("certify", "verify certified decay along an integrated run"));
  certify->add_option("--x0", staged.v.x0, "output-anchored start value");
  certify->add_option("--cost", staged.v.cost, "benchmark | quadratic | smoothed_abs");
  certify->add_option("--dimension", staged.v.dimension, "coordinate count for synthetic costs");
  certify->add_option("--M", staged.v.M, "strong-convexity constant override");
  certify->add_option("--L", staged.v.L, "gradient Lipschitz constant override");
  certify->add_option("--rate-scale", staged.v.rate_scale,
                      "certified-rate multiplier; 2 is a negative control");

  simulate->callback([&] { exit_code = tmm::cmd_simulate(resolve(*simulate, staged)); });
  rates->callback([&] { exit_code = tmm::cmd_rates(resolve(*rates, staged)); });
  iqc->callback([&] { exit_code = tmm::cmd_iqc(resolve(*iqc, staged)); });
  certify->callback([&] { exit_code = tmm::cmd_certify(resolve(*certify, staged)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
