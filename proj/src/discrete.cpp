#include "tmm/discrete.hpp"

#include "tmm/errors.hpp"

#include <cmath>

namespace tmm {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::tm: return "tm";
    case Algorithm::nag: return "nag";
    case Algorithm::gd: return "gd";
  }
  return "?";
}

DiscreteState initial_discrete_state(const Vec& x0) {
  return {x0, x0, x0, x0, 0};
}

namespace {

// Shared kernel: eps_{k+1} = (1+b) eps - b eps_prev - a grad f(y),
// y = (1+g) eps - g eps_prev, x = (1+d) eps - d eps_prev.
DiscreteState momentum_step(const DiscreteState& s, const CostFunction& f, double a, double b,
                            double g, double d) {
  if (s.eps_curr.size() != f.dimension || s.eps_prev.size() != f.dimension)
    throw ArgumentError("momentum step: state dimension does not match cost");
  const Vec y = (1.0 + g) * s.eps_curr - g * s.eps_prev;
  const Vec grad = f.gradient(y);
  if (!grad.allFinite())
    throw NumericalFailure("momentum step: nonfinite gradient at iteration " +
                               std::to_string(s.k),
                           static_cast<double>(s.k));
  DiscreteState next;
  next.eps_prev = s.eps_curr;
  next.eps_curr = (1.0 + b) * s.eps_curr - b * s.eps_prev - a * grad;
  next.y = (1.0 + g) * next.eps_curr - g * next.eps_prev;
  next.x = (1.0 + d) * next.eps_curr - d * next.eps_prev;
  next.k = s.k + 1;
  return next;
}

}  // namespace

DiscreteState tm_step(const DiscreteState& state, const TMParameters& params,
                      const CostFunction& f) {
  if (!std::isfinite(params.alpha + params.beta + params.gamma + params.delta))
    throw ArgumentError("tm_step: nonfinite parameters");
  return momentum_step(state, f, params.alpha, params.beta, params.gamma, params.delta);
}

DiscreteState nag_step(const DiscreteState& state, const CostFunction& f, double stepsize) {
  if (!(stepsize > 0.0)) throw ArgumentError("nag_step: stepsize must be positive");
  const double q = std::sqrt(f.M * stepsize);
  const double m = (1.0 - q) / (1.0 + q);
  return momentum_step(state, f, stepsize, m, m, 0.0);
}

DiscreteState gd_step(const DiscreteState& state, const CostFunction& f, double stepsize) {
  if (!(stepsize > 0.0)) throw ArgumentError("gd_step: stepsize must be positive");
  return momentum_step(state, f, stepsize, 0.0, 0.0, 0.0);
}

Trajectory run_discrete(Algorithm algorithm, const CostFunction& f, const TMParameters& params,
                        const Vec& x0, long iterations, double stepsize_scale) {
  if (iterations < 0) throw ArgumentError("run_discrete: iterations must be >= 0");
  if (!(stepsize_scale > 0.0) || stepsize_scale > 1.0)
    throw ArgumentError("run_discrete: stepsize_scale must lie in (0, 1]");
  if (x0.size() != f.dimension) throw ArgumentError("run_discrete: x0 dimension mismatch");
  if (!f.has_minimizer()) throw CapabilityError("run_discrete: cost needs a known minimizer");

  const double base = algorithm == Algorithm::tm ? params.alpha : 1.0 / f.L;
  const double step = base * stepsize_scale;
  const double t_unit = algorithm == Algorithm::gd ? step : std::sqrt(step);

  Trajectory traj;
  traj.algorithm = to_string(algorithm);
  traj.mode = Mode::discrete;
  traj.stepsize = step;
  traj.samples.reserve(static_cast<std::size_t>(iterations) + 1);

  DiscreteState state = initial_discrete_state(x0);
  const auto record = [&](const DiscreteState& s) {
    Sample sm;
    sm.k = s.k;
    sm.t = static_cast<double>(s.k) * t_unit;
    sm.output = s.x;
    sm.aux_output = s.y;
    sm.f_error = f.error_at(s.x);
    sm.grad_norm = f.gradient(s.x).norm();
    traj.samples.push_back(std::move(sm));
  };
  record(state);

  const double start_error = traj.samples.front().f_error;
  const double divergence_cap = std::max(1e6 * start_error, 1e-8);
  TMParameters scaled = params;
  scaled.alpha = step;  // beta/gamma/delta are stepsize-independent
  // Like tm's beta, the nag momentum keeps its base-stepsize value: the scale
  // multiplies only the gradient term.
  const double nag_q = std::sqrt(f.M / f.L);
  const double nag_m = (1.0 - nag_q) / (1.0 + nag_q);

  for (long k = 0; k < iterations; ++k) {
    switch (algorithm) {
      case Algorithm::tm: state = tm_step(state, scaled, f); break;
      case Algorithm::nag: state = momentum_step(state, f, step, nag_m, nag_m, 0.0); break;
      case Algorithm::gd: state = gd_step(state, f, step); break;
    }
    if (!state.eps_curr.allFinite())
      throw NumericalFailure("run_discrete: nonfinite state at iteration " + std::to_string(k + 1),
                             static_cast<double>(k + 1));
    record(state);
    if (traj.samples.back().f_error > divergence_cap)
      throw DivergenceError("run_discrete: f_error grew past 1e6 x its start at iteration " +
                                std::to_string(state.k),
                            static_cast<double>(state.k));
  }
  return traj;
}

}  // namespace tmm
