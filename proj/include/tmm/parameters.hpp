#pragma once

#include <vector>

namespace tmm {

/// Closed-form parameter tuple of the triple-momentum family, together with the
/// derived condition number, rate base and damping constant:
///   kappa = L/M,  rho = 1 - 1/sqrt(kappa)
///   alpha = (1+rho)/L,        beta  = rho^2/(2-rho)
///   gamma = rho^2/((1+rho)(2-rho)),  delta = rho^2/(1-rho^2)
///   mu    = ((1-beta)/(sqrt(alpha)(1+beta)))^2
struct TMParameters {
  double M = 0, L = 0;
  double kappa = 1, rho = 0;
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  double mu = 0;
};

/// The exact tuple above. Throws ArgumentError unless 0 < M <= L.
TMParameters tm_parameters(double M, double L);

/// Constants describing the strongly-convex Nesterov iteration with stepsize s:
/// beta = gamma-equivalent momentum (1-sqrt(Ms))/(1+sqrt(Ms)), delta = 0,
/// mu evaluates to exactly M. Useful for driving the shared continuous model.
TMParameters nag_parameters(double M, double L, double stepsize);

/// Same tuple with alpha multiplied by `scale` and mu recomputed from (alpha, beta);
/// beta, gamma, delta are kept. Models the stepsize-robustness family.
TMParameters scaled_alpha(const TMParameters& p, double scale);

/// mu(alpha, beta) = ((1-beta)/(sqrt(alpha)(1+beta)))^2.
/// Throws SingularParameterError at beta = 1, ArgumentError for invalid alpha/beta.
double mu_from_alpha_beta(double alpha, double beta);

/// mu as an explicit rational function of kappa (scaled by L):
///   (9 k^2 rk - 6 k^2 + k rk) L / (8 k^3 rk - 12 k^3 + 14 k^2 rk - 9 k^2 + 4 k rk - k)
/// with rk = sqrt(kappa). Throws ArgumentError for kappa < 1 or L <= 0.
double mu_from_kappa(double kappa, double L);

struct MuBoundsRow {
  double kappa = 0, mu_over_L = 0, mu_over_M = 0;
};

/// Table of (kappa, mu/L, mu/M) over an ascending grid of kappa >= 1.
std::vector<MuBoundsRow> mu_bounds_sweep(const std::vector<double>& kappa_grid, double L);

/// n log-spaced points from lo to hi inclusive (n >= 1, 0 < lo <= hi).
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace tmm
