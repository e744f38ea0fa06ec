#pragma once

#include "tmm/cost_function.hpp"
#include "tmm/parameters.hpp"
#include "tmm/trajectory.hpp"

namespace tmm {

/// Two-term momentum state. After every step the outputs satisfy
/// y = (1+gamma) eps_curr - gamma eps_prev and x = (1+delta) eps_curr - delta eps_prev.
struct DiscreteState {
  Vec eps_curr, eps_prev;
  Vec y, x;
  long k = 0;
};

enum class Algorithm { tm, nag, gd };

std::string to_string(Algorithm a);

/// State with eps_prev = eps_curr = x0 (the first step is then a pure gradient step).
DiscreteState initial_discrete_state(const Vec& x0);

/// One application of the triple-momentum recursion
///   eps_{k+1} = (1+beta) eps_k - beta eps_{k-1} - alpha grad f(y_k).
DiscreteState tm_step(const DiscreteState& state, const TMParameters& params,
                      const CostFunction& f);

/// Constant-momentum Nesterov step with momentum (1-sqrt(Ms))/(1+sqrt(Ms));
/// the momentum is a function of the stepsize actually used.
DiscreteState nag_step(const DiscreteState& state, const CostFunction& f, double stepsize);

/// Plain gradient step x_{k+1} = x_k - s grad f(x_k).
DiscreteState gd_step(const DiscreteState& state, const CostFunction& f, double stepsize);

/// Runs `iterations` steps from x0 recording f_error and grad_norm at the
/// algorithm output each iteration (sample k = 0 is the start). The base
/// stepsize (alpha for tm, 1/L for nag/gd) is multiplied by stepsize_scale,
/// which must lie in (0, 1]; momentum coefficients keep their base-stepsize
/// values, so the scale touches only the gradient term. Discrete time is
/// mapped as t = k sqrt(step) for the second-order methods and t = k step
/// for gd.
/// Aborts with DivergenceError when f_error exceeds 1e6 x its starting value
/// (and an absolute floor of 1e-8).
Trajectory run_discrete(Algorithm algorithm, const CostFunction& f, const TMParameters& params,
                        const Vec& x0, long iterations, double stepsize_scale = 1.0);

}  // namespace tmm
