#include "tmm/ode.hpp"

#include "tmm/errors.hpp"

#include <cmath>

namespace tmm {

std::string to_string(OdeTag t) {
  switch (t) {
    case OdeTag::tm_high_res: return "tm_high_res";
    case OdeTag::nag_high_res: return "nag_high_res";
    case OdeTag::low_res: return "low_res";
    case OdeTag::gradient_flow: return "gradient_flow";
  }
  return "?";
}

OdeModel OdeModel::tm_high_res(const TMParameters& p) {
  OdeModel m;
  m.tag = OdeTag::tm_high_res;
  m.c_damp = 2.0 * std::sqrt(p.mu);
  m.c_grad = 1.0 + std::sqrt(p.mu * p.alpha);
  m.c_y = std::sqrt(p.alpha) * p.gamma;
  m.c_x = std::sqrt(p.alpha) * p.delta;
  return m;
}

OdeModel OdeModel::nag_high_res(double M, double stepsize) {
  if (!(M > 0.0) || !(stepsize > 0.0))
    throw ArgumentError("nag_high_res: M and stepsize must be positive");
  const double q = std::sqrt(M * stepsize);
  OdeModel m;
  m.tag = OdeTag::nag_high_res;
  m.c_damp = 2.0 * std::sqrt(M);
  m.c_grad = 1.0 + q;
  m.c_y = std::sqrt(stepsize) / (1.0 + q);
  m.c_x = 0.0;
  return m;
}

OdeModel OdeModel::low_res(double mu) {
  if (!(mu > 0.0)) throw ArgumentError("low_res: mu must be positive");
  OdeModel m;
  m.tag = OdeTag::low_res;
  m.c_damp = 2.0 * std::sqrt(mu);
  m.c_grad = 1.0;
  m.c_y = 0.0;
  m.c_x = 0.0;
  return m;
}

OdeModel OdeModel::gradient_flow() {
  OdeModel m;
  m.tag = OdeTag::gradient_flow;
  return m;
}

Vec OdeModel::acceleration(const CostFunction& f, const OdeState& s) const {
  if (!second_order()) throw CapabilityError("acceleration: model is first-order");
  return -c_damp * s.eps_dot - c_grad * f.gradient(output_y(s));
}

Vec OdeModel::output_y_dot(const CostFunction& f, const OdeState& s) const {
  if (!second_order()) return -f.gradient(s.eps);
  return s.eps_dot + c_y * acceleration(f, s);
}

OdeState model_initial_state(const OdeModel& model, const Vec& Y0, const CostFunction& f) {
  if (Y0.size() != f.dimension) throw ArgumentError("model_initial_state: Y0 dimension mismatch");
  if (!model.second_order()) return {Y0, Vec::Zero(Y0.size()), 0.0};
  const double denom = 1.0 - model.c_y * model.c_damp;
  if (std::abs(denom) < 1e-12)
    throw SingularParameterError("model_initial_state: 1 - c_y c_damp is numerically zero");
  const Vec g = f.gradient(Y0);
  OdeState s;
  s.eps_dot = (model.c_y * model.c_grad / denom) * g;
  s.eps = Y0 - model.c_y * s.eps_dot;
  s.t = 0.0;
  return s;
}

OdeState tm_initial_state(const Vec& Y0, const TMParameters& params, const CostFunction& f) {
  return model_initial_state(OdeModel::tm_high_res(params), Y0, f);
}

OdeState nag_initial_state(const Vec& Y0, double M, double stepsize, const CostFunction& f) {
  return model_initial_state(OdeModel::nag_high_res(M, stepsize), Y0, f);
}

OdeState equilibrium_state(const CostFunction& f) {
  if (!f.has_minimizer()) throw CapabilityError("equilibrium_state: cost has no minimizer");
  return {*f.minimizer, Vec::Zero(f.dimension), 0.0};
}

namespace {

struct Deriv {
  Vec de, dv;
};

Deriv rhs(const OdeModel& m, const CostFunction& f, const Vec& eps, const Vec& eps_dot) {
  if (m.tag == OdeTag::gradient_flow) return {-f.gradient(eps), Vec::Zero(eps.size())};
  const Vec y = eps + m.c_y * eps_dot;
  return {eps_dot, -m.c_damp * eps_dot - m.c_grad * f.gradient(y)};
}

}  // namespace

Trajectory integrate(const OdeModel& model, const CostFunction& f, const OdeState& initial,
                     double dt, double t_end, int sample_every, const LyapunovFn& lyapunov) {
  const double dt_max = 0.1 / std::sqrt(f.L);
  if (!(dt > 0.0) || dt > dt_max)
    throw ArgumentError("integrate: need 0 < dt <= 0.1/sqrt(L) = " + format_double(dt_max));
  if (!(t_end >= 0.0)) throw ArgumentError("integrate: t_end must be >= 0");
  if (sample_every < 1) throw ArgumentError("integrate: sample_every must be >= 1");
  if (initial.eps.size() != f.dimension || initial.eps_dot.size() != f.dimension)
    throw ArgumentError("integrate: initial state dimension mismatch");
  if (!f.has_minimizer()) throw CapabilityError("integrate: cost needs a known minimizer");

  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));

  Trajectory traj;
  traj.algorithm = to_string(model.tag);
  traj.mode = Mode::continuous;
  traj.stepsize = dt;
  traj.samples.reserve(static_cast<std::size_t>(steps / sample_every) + 2);

  OdeState state = initial;
  const auto record = [&](const OdeState& s) {
    Sample sm;
    sm.t = s.t;
    sm.eps = s.eps;
    sm.eps_dot = s.eps_dot;
    sm.output = model.output_y(s);
    sm.aux_output = model.output_x(s);
    sm.f_error = f.error_at(sm.output);
    sm.grad_norm = f.gradient(sm.output).norm();
    if (lyapunov) sm.lyapunov = lyapunov(model, s);
    traj.samples.push_back(std::move(sm));
  };
  record(state);

  for (long i = 0; i < steps; ++i) {
    const Vec &e = state.eps, &v = state.eps_dot;
    const Deriv k1 = rhs(model, f, e, v);
    const Deriv k2 = rhs(model, f, e + 0.5 * dt * k1.de, v + 0.5 * dt * k1.dv);
    const Deriv k3 = rhs(model, f, e + 0.5 * dt * k2.de, v + 0.5 * dt * k2.dv);
    const Deriv k4 = rhs(model, f, e + dt * k3.de, v + dt * k3.dv);
    OdeState next;
    next.eps = e + (dt / 6.0) * (k1.de + 2.0 * k2.de + 2.0 * k3.de + k4.de);
    next.eps_dot = v + (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    next.t = static_cast<double>(i + 1) * dt;
    if (!next.eps.allFinite() || !next.eps_dot.allFinite())
      throw NumericalFailure("integrate: nonfinite state; last good t = " + format_double(state.t),
                             state.t);
    state = std::move(next);
    if ((i + 1) % sample_every == 0 || i + 1 == steps) record(state);
  }
  return traj;
}

double y_form_residual(const OdeModel& model, const CostFunction& f, const OdeState& s) {
  if (!model.second_order()) throw CapabilityError("y_form_residual: model is first-order");
  if (!f.hessian_vector) throw CapabilityError("y_form_residual: cost has no hessian_vector");
  const Vec y = model.output_y(s);
  const Vec grad = f.gradient(y);
  const Vec acc = -model.c_damp * s.eps_dot - model.c_grad * grad;
  const Vec y_dot = s.eps_dot + model.c_y * acc;
  // d(eps'')/dt = -c_damp eps'' - c_grad H(Y) Y', so Y'' = eps'' + c_y d(eps'')/dt.
  const Vec hyd = f.hessian_vector(y, y_dot);
  const Vec y_ddot = acc + model.c_y * (-model.c_damp * acc - model.c_grad * hyd);
  const Vec resid = y_ddot + model.c_damp * y_dot + model.c_y * model.c_grad * hyd +
                    model.c_grad * grad;
  return resid.norm();
}

}  // namespace tmm
