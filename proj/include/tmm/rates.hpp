#pragma once

#include "tmm/cost_function.hpp"
#include "tmm/ode.hpp"
#include "tmm/parameters.hpp"
#include "tmm/trajectory.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tmm {

enum class RateSource { lyapunov_tm, lyapunov_nag, iqc };

std::string to_string(RateSource s);

/// A certified exponential decay rate (absolute units, i.e. scales as sqrt(L))
/// together with the parameters it was derived from.
struct RateCertificate {
  double rate = 0;
  double phi_star = std::numeric_limits<double>::quiet_NaN();
  RateSource source = RateSource::lyapunov_tm;
  double mu = 0, alpha = 0, gamma = 0, kappa = 1, L = 0, M = 0;
  double tolerance = 0;
};

/// V = c_g (f(Y) - f(x*)) + |Y'|^2/4 + |Y' + 2 sqrt(mu)(Y - x*) + gamma c_g sqrt(alpha) grad f(Y)|^2/4
/// with c_g = 1 + sqrt(mu alpha) and Y' evaluated as in the continuous model
/// (no Hessian product involved). Requires a stored minimizer.
double lyapunov_value(const TMParameters& params, const CostFunction& f, const OdeState& s);

/// Closure recording lyapunov_value along an integration.
LyapunovFn lyapunov_recorder(const TMParameters& params, const CostFunction& f);

/// Four-term candidate rate
///   p(phi) = min{ sqrt(mu)/2, 3L/(4 kappa (1+phi) sqrt(mu)),
///                 1/(gamma sqrt(alpha)(1 + 1/phi)), 4 sqrt(mu)/(3 + 2/phi) };
/// the third term is +inf when gamma = 0. Throws ArgumentError for phi <= 0.
double p_tm(double phi, const TMParameters& params);

/// Nesterov counterpart sqrt(M) * min{1/2, 3/(4(1+phi)), 1/(1+1/phi), 4/(3+2/phi)}.
double p_nag(double phi, double M);

struct PhiMax {
  double phi = 0, value = 0;
};

/// Independent numeric maximization: log grid over [1e-6, 1e6] followed by
/// golden-section refinement. Deterministic.
PhiMax maximize_over_phi(const std::function<double(double)>& p_of_phi);

/// Certificate at the closed-form maximizer
///   phi* = (9L - 16 mu kappa + sqrt(256 (mu kappa)^2 + 96 mu kappa L + 81 L^2)) / (32 mu kappa),
/// cross-validated against maximize_over_phi; disagreement beyond relative 1e-4
/// raises CertificateInconsistency instead of silently picking one value.
RateCertificate p_star_tm(const TMParameters& params);

/// rate = (3/7) sqrt(M) at phi* = 0.75, confirmed by numeric maximization.
RateCertificate p_star_nag(double M);

struct DecayCheck {
  std::string name;
  double margin = 0, tolerance = 0;
  bool passed = true;
  std::size_t worst_sample = 0;
};

struct DecayReport {
  bool passed = true;
  std::vector<DecayCheck> checks;
  const DecayCheck* find(const std::string& name) const;
};

/// Trajectory-level certificate checks on recorded Lyapunov samples:
///   exponential_envelope   max V(t) - V(0) e^{-rate t}        <= 1e-8 V(0)
///   derivative_margin      max dV/dt (central diff) + rate V  <= spacing-scaled tol
///   scaled_monotonicity    V(t) e^{rate t} nonincreasing      up to 1e-8 V(0)
///   value_bound            f(Y)-f(x*) <= prefactor(rho)/alpha |Y0-x*|^2 e^{-rate t} + 1e-10
/// value_bound runs only when y0 (the output-anchored start) is supplied.
/// All tolerances carry a tiny absolute floor so an equilibrium start passes.
DecayReport verify_decay(const Trajectory& traj, const RateCertificate& cert,
                         const CostFunction& f, const std::optional<Vec>& y0 = {});

/// Exact decay prefactor (1.5 r^4 + 3 r^3 - 3.5 r^2 - 4 r + 6)/(-r^3 + 3 r^2 - 4 r + 4)
/// at r = rho; approaches 1.5 as rho -> 1 and never exceeds it.
double value_bound_prefactor(double rho);

struct RateSweepRow {
  double kappa = 0, p_tm_over_sqrt_L = 0, p_nag_over_sqrt_L = 0, phi_star_tm = 0;
};

/// Table of certified rates over a kappa grid (entries >= 1) at fixed L.
std::vector<RateSweepRow> rate_sweep(const std::vector<double>& kappa_grid, double L);

}  // namespace tmm
