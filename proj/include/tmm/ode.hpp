#pragma once

#include "tmm/cost_function.hpp"
#include "tmm/parameters.hpp"
#include "tmm/trajectory.hpp"

#include <functional>

namespace tmm {

enum class OdeTag { tm_high_res, nag_high_res, low_res, gradient_flow };

std::string to_string(OdeTag t);

struct OdeState {
  Vec eps, eps_dot;
  double t = 0;
};

/// Continuous-time model. The second-order members share the shape
///   eps'' = -c_damp eps' - c_grad grad f(Y),   Y = eps + c_y eps',  X = eps + c_x eps';
/// gradient_flow is the first-order special case eps' = -grad f(eps), Y = X = eps.
struct OdeModel {
  OdeTag tag = OdeTag::tm_high_res;
  double c_damp = 0, c_grad = 0, c_y = 0, c_x = 0;

  /// c_damp = 2 sqrt(mu), c_grad = 1 + sqrt(mu alpha), c_y = sqrt(alpha) gamma,
  /// c_x = sqrt(alpha) delta.
  static OdeModel tm_high_res(const TMParameters& p);
  /// c_damp = 2 sqrt(M), c_grad = 1 + sqrt(Ms), c_y = sqrt(s)/(1 + sqrt(Ms)), c_x = 0.
  static OdeModel nag_high_res(double M, double stepsize);
  /// eps'' = -2 sqrt(mu) eps' - grad f(eps); shared by all momentum methods.
  static OdeModel low_res(double mu);
  static OdeModel gradient_flow();

  bool second_order() const { return tag != OdeTag::gradient_flow; }
  Vec output_y(const OdeState& s) const { return s.eps + c_y * s.eps_dot; }
  Vec output_x(const OdeState& s) const { return s.eps + c_x * s.eps_dot; }
  /// eps'' at the given state (second-order models only).
  Vec acceleration(const CostFunction& f, const OdeState& s) const;
  /// dY/dt = eps' + c_y eps''; computed without any Hessian evaluation.
  Vec output_y_dot(const CostFunction& f, const OdeState& s) const;
};

/// Initial state placing the model output at Y0 with dY/dt(0) = 0:
///   eps'(0) = c_y c_grad grad f(Y0) / (1 - c_y c_damp),  eps(0) = Y0 - c_y eps'(0).
/// Throws SingularParameterError when |1 - c_y c_damp| < 1e-12.
OdeState model_initial_state(const OdeModel& model, const Vec& Y0, const CostFunction& f);

/// model_initial_state for the triple-momentum model built from `params`.
OdeState tm_initial_state(const Vec& Y0, const TMParameters& params, const CostFunction& f);

/// model_initial_state for the Nesterov model at (M, stepsize).
OdeState nag_initial_state(const Vec& Y0, double M, double stepsize, const CostFunction& f);

/// (eps = x*, eps' = 0); requires a stored minimizer.
OdeState equilibrium_state(const CostFunction& f);

/// Optional per-sample scalar recorded into Sample::lyapunov during integration.
using LyapunovFn = std::function<double(const OdeModel&, const OdeState&)>;

/// Classical fixed-step RK4 from `initial` to t_end (rounded up to a whole
/// number of steps). Requires 0 < dt <= 0.1/sqrt(L). Records a sample at the
/// start, every `sample_every`-th step, and the final step: t, f_error and
/// gradient norm at Y, the raw state, Y, X, and the Lyapunov value if given.
Trajectory integrate(const OdeModel& model, const CostFunction& f, const OdeState& initial,
                     double dt, double t_end, int sample_every = 1,
                     const LyapunovFn& lyapunov = {});

/// Norm of the output-form residual
///   Y'' + c_damp Y' + c_y c_grad H(Y) Y' + c_grad grad f(Y)
/// evaluated from (eps, eps'); an algebraic-identity check that vanishes (to
/// roundoff) for second-order models. Requires a Hessian product.
double y_form_residual(const OdeModel& model, const CostFunction& f, const OdeState& s);

}  // namespace tmm
