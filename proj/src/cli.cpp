#include "tmm/cli.hpp"

#include "tmm/discrete.hpp"
#include "tmm/errors.hpp"
#include "tmm/iqc.hpp"
#include "tmm/ode.hpp"
#include "tmm/parameters.hpp"
#include "tmm/rates.hpp"
#include "tmm/trajectory.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tmm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ArgumentError("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
  if (used != value.size())
    throw ArgumentError("config: key '" + key + "' has trailing text in '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw ArgumentError("config: key '" + key + "' must be an integer");
  return static_cast<long>(v);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ArgumentError("config: key '" + key + "' has an empty list");
  return out;
}

void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "cost")
    cfg.cost = value;
  else if (key == "algorithms")
    cfg.algorithms = split_list(value);
  else if (key == "dimension")
    cfg.dimension = static_cast<int>(parse_long(key, value));
  else if (key == "M")
    cfg.M = parse_double(key, value);
  else if (key == "L")
    cfg.L = parse_double(key, value);
  else if (key == "stepsize_scale")
    cfg.stepsize_scale = parse_double(key, value);
  else if (key == "dt")
    cfg.dt = parse_double(key, value);
  else if (key == "t_end")
    cfg.t_end = parse_double(key, value);
  else if (key == "iterations")
    cfg.iterations = parse_long(key, value);
  else if (key == "x0")
    cfg.x0 = parse_double(key, value);
  else if (key == "out_dir")
    cfg.out_dir = value;
  else if (key == "seed")
    cfg.seed = static_cast<unsigned long>(parse_long(key, value));
  else if (key == "rate_scale")
    cfg.rate_scale = parse_double(key, value);
  else if (key == "kappa_min")
    cfg.kappa_min = parse_double(key, value);
  else if (key == "kappa_max")
    cfg.kappa_max = parse_double(key, value);
  else if (key == "kappa_points")
    cfg.kappa_points = static_cast<int>(parse_long(key, value));
  else if (key == "M_list")
    cfg.M_list = parse_double_list(key, value);
  else if (key == "kappa_list")
    cfg.kappa_list = parse_double_list(key, value);
  else if (key == "tolerance")
    cfg.tolerance = parse_double(key, value);
  else if (key == "preset")
    apply_preset(cfg, value);
  else
    throw ArgumentError("config: unknown key '" + key + "'");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  return out;
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "tm") return Algorithm::tm;
  if (name == "nag") return Algorithm::nag;
  if (name == "gd") return Algorithm::gd;
  throw ArgumentError("config: unknown algorithm '" + name + "'");
}

// Decay functional recorded along the Nesterov model:
//   (1 + sqrt(Ms))(f(Y) - f*) + |Y'|^2/4 + |Y' + sqrt(s) grad f(Y) + sqrt(M)(Y - x*)|^2/4.
LyapunovFn nag_lyapunov(const CostFunction& f, double M, double stepsize) {
  return [f, M, stepsize](const OdeModel& model, const OdeState& s) {
    const Vec y = model.output_y(s);
    const Vec y_dot = model.output_y_dot(f, s);
    const Vec mix = y_dot + std::sqrt(stepsize) * f.gradient(y) + std::sqrt(M) * (y - *f.minimizer);
    return (1.0 + std::sqrt(M * stepsize)) * f.error_at(y) + 0.25 * y_dot.squaredNorm() +
           0.25 * mix.squaredNorm();
  };
}

}  // namespace

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name != "fig6a" && name != "fig6b")
    throw ArgumentError("config: unknown preset '" + name + "'");
  cfg.cost = "benchmark";
  cfg.dimension = 1;
  cfg.algorithms = {"tm", "nag", "gd"};
  cfg.iterations = 50;
  cfg.x0 = 3.0;
  cfg.stepsize_scale = name == "fig6a" ? 1.0 : 0.3;
  cfg.M = cfg.L = 0;
  cfg.dt = cfg.t_end = 0;
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config: line " + std::to_string(lineno) + " of '" + path +
                          "' is not 'key = value'");
    set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

CostFunction make_cost(const ExperimentConfig& cfg) {
  if (cfg.cost == "benchmark") {
    CostFunction f = benchmark_cost();
    if (cfg.M > 0) f.M = cfg.M;
    if (cfg.L > 0) f.L = cfg.L;
    return f;
  }
  const double M = cfg.M > 0 ? cfg.M : 1.0;
  const double L = cfg.L > 0 ? cfg.L : 10.0;
  if (!(M <= L)) throw ArgumentError("config: need M <= L");
  if (cfg.dimension < 1) throw ArgumentError("config: dimension must be positive");
  if (cfg.cost == "quadratic") {
    const std::vector<double> spectrum = log_grid(M, L, cfg.dimension);
    return quadratic_cost(
        Eigen::Map<const Vec>(spectrum.data(), static_cast<Eigen::Index>(spectrum.size())));
  }
  if (cfg.cost == "smoothed_abs") return smoothed_abs_cost(M, L, cfg.dimension);
  throw ArgumentError("config: unknown cost '" + cfg.cost + "'");
}

int cmd_simulate(const ExperimentConfig& cfg) {
  if (!(cfg.stepsize_scale > 0.0 && cfg.stepsize_scale <= 1.0))
    throw ArgumentError("config: stepsize_scale must lie in (0, 1]");
  if (cfg.iterations < 0) throw ArgumentError("config: iterations must be >= 0");
  const CostFunction f = make_cost(cfg);
  const TMParameters params = tm_parameters(f.M, f.L);
  const Vec start = Vec::Constant(f.dimension, cfg.x0);
  const double dt = cfg.dt > 0 ? cfg.dt : 0.01 / std::sqrt(f.L);

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream combined = open_out(std::filesystem::path(cfg.out_dir) / "combined.csv");
  combined << "algorithm,mode,t,f_error\n";

  try {
    for (const std::string& name : cfg.algorithms) {
      const Algorithm alg = algorithm_from_name(name);
      const Trajectory disc =
          run_discrete(alg, f, params, start, cfg.iterations, cfg.stepsize_scale);
      {
        std::ofstream out =
            open_out(std::filesystem::path(cfg.out_dir) / (name + "_discrete.csv"));
        write_discrete_csv(disc, out);
      }
      append_long_rows(disc, combined);

      OdeModel model;
      OdeState init;
      LyapunovFn recorder;
      double t_unit = 0;
      switch (alg) {
        case Algorithm::tm: {
          const TMParameters sp = scaled_alpha(params, cfg.stepsize_scale);
          model = OdeModel::tm_high_res(sp);
          init = tm_initial_state(start, sp, f);
          recorder = lyapunov_recorder(sp, f);
          t_unit = std::sqrt(sp.alpha);
          break;
        }
        case Algorithm::nag: {
          const double s = cfg.stepsize_scale / f.L;
          model = OdeModel::nag_high_res(f.M, s);
          init = nag_initial_state(start, f.M, s, f);
          recorder = nag_lyapunov(f, f.M, s);
          t_unit = std::sqrt(s);
          break;
        }
        case Algorithm::gd: {
          model = OdeModel::gradient_flow();
          init = OdeState{start, Vec::Zero(f.dimension), 0.0};
          t_unit = cfg.stepsize_scale / f.L;
          break;
        }
      }
      const double t_end =
          cfg.t_end > 0 ? cfg.t_end : static_cast<double>(cfg.iterations) * t_unit;
      Trajectory ode = integrate(model, f, init, dt, t_end, 1, recorder);
      ode.algorithm = name;
      {
        std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / (name + "_ode.csv"));
        write_continuous_csv(ode, out);
      }
      append_long_rows(ode, combined);
    }
  } catch (const DivergenceError& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return 1;
  }
  std::cout << "simulate: wrote " << cfg.out_dir << "/combined.csv and per-method tables\n";
  return 0;
}

int cmd_rates(const ExperimentConfig& cfg) {
  const double L = cfg.L > 0 ? cfg.L : 1.0;
  const std::vector<double> grid = log_grid(cfg.kappa_min, cfg.kappa_max, cfg.kappa_points);
  std::filesystem::create_directories(cfg.out_dir);

  {
    std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / "mu_bounds.csv");
    out << "kappa,mu_over_L,mu_over_M\n";
    for (const MuBoundsRow& r : mu_bounds_sweep(grid, L))
      out << format_double(r.kappa) << ',' << format_double(r.mu_over_L) << ','
          << format_double(r.mu_over_M) << "\n";
  }
  {
    std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / "rate_sweep.csv");
    out << "kappa,p_tm_over_sqrtL,p_nag_over_sqrtL,phi_star_tm\n";
    for (const RateSweepRow& r : rate_sweep(grid, L))
      out << format_double(r.kappa) << ',' << format_double(r.p_tm_over_sqrt_L) << ','
          << format_double(r.p_nag_over_sqrt_L) << ',' << format_double(r.phi_star_tm) << "\n";
  }
  {
    std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / "alpha_sweep.csv");
    out << "kappa,alpha_scale,p_over_sqrtL\n";
    const double scales[] = {0.25, 0.5, 1.0, 2.0};
    const double sq_L = std::sqrt(L);
    for (const double kappa : grid) {
      const TMParameters base = tm_parameters(L / kappa, L);
      for (const double scale : scales) {
        const RateCertificate cert = p_star_tm(scaled_alpha(base, scale));
        out << format_double(kappa) << ',' << format_double(scale) << ','
            << format_double(cert.rate / sq_L) << "\n";
      }
    }
  }
  std::cout << "rates: wrote " << cfg.out_dir
            << "/{mu_bounds,rate_sweep,alpha_sweep}.csv over " << grid.size()
            << " kappa points\n";
  return 0;
}

int cmd_iqc(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / "iqc.csv");
  out << "M,kappa,p_iqc_star,sigma,P11,P12,P22,status\n";
  for (const IqcSweepRow& r : iqc_sweep(cfg.M_list, cfg.kappa_list, cfg.tolerance))
    out << format_double(r.M) << ',' << format_double(r.kappa) << ','
        << format_double(r.p_iqc_star) << ',' << format_double(r.sigma) << ','
        << format_double(r.P11) << ',' << format_double(r.P12) << ',' << format_double(r.P22)
        << ',' << r.status << "\n";
  std::cout << "iqc: wrote " << cfg.out_dir << "/iqc.csv\n";
  return 0;
}

int cmd_certify(const ExperimentConfig& cfg) {
  if (!(cfg.rate_scale > 0)) throw ArgumentError("config: rate_scale must be positive");
  const CostFunction f = make_cost(cfg);
  const TMParameters params = tm_parameters(f.M, f.L);
  RateCertificate cert = p_star_tm(params);
  cert.rate *= cfg.rate_scale;

  const Vec y0 = Vec::Constant(f.dimension, cfg.x0);
  const OdeState init = tm_initial_state(y0, params, f);
  const double dt = cfg.dt > 0 ? cfg.dt : 0.01 / std::sqrt(f.L);
  const double t_end = cfg.t_end > 0 ? cfg.t_end : 200.0 / std::sqrt(f.L);
  const Trajectory traj = integrate(OdeModel::tm_high_res(params), f, init, dt, t_end, 1,
                                    lyapunov_recorder(params, f));
  const DecayReport report = verify_decay(traj, cert, f, y0);

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out = open_out(std::filesystem::path(cfg.out_dir) / "report.txt");
  out << "rate " << format_double(cert.rate) << " (source " << to_string(cert.source)
      << ", phi_star " << format_double(cert.phi_star) << ", rate_scale "
      << format_double(cfg.rate_scale) << ")\n";
  out << "samples " << traj.samples.size() << " dt " << format_double(dt) << " t_end "
      << format_double(t_end) << "\n";
  for (const DecayCheck& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " margin " << format_double(c.margin)
        << " tolerance " << format_double(c.tolerance) << " worst_sample " << c.worst_sample
        << "\n";
  out << (report.passed ? "RESULT PASS\n" : "RESULT FAIL\n");
  std::cout << (report.passed ? "certify: PASS\n" : "certify: FAIL, see report.txt\n");
  return report.passed ? 0 : 1;
}

}  // namespace tmm
