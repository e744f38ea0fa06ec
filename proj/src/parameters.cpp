#include "tmm/parameters.hpp"

#include "tmm/errors.hpp"

#include <cmath>
#include <string>

namespace tmm {

TMParameters tm_parameters(double M, double L) {
  if (!(M > 0.0) || !(L > 0.0) || M > L)
    throw ArgumentError("tm_parameters: need 0 < M <= L, got M=" + std::to_string(M) +
                        " L=" + std::to_string(L));
  TMParameters p;
  p.M = M;
  p.L = L;
  p.kappa = L / M;
  p.rho = 1.0 - 1.0 / std::sqrt(p.kappa);
  const double rho = p.rho;
  p.alpha = (1.0 + rho) / L;
  p.beta = rho * rho / (2.0 - rho);
  p.gamma = rho * rho / ((1.0 + rho) * (2.0 - rho));
  p.delta = rho * rho / (1.0 - rho * rho);
  p.mu = mu_from_alpha_beta(p.alpha, p.beta);
  return p;
}

TMParameters nag_parameters(double M, double L, double stepsize) {
  if (!(M > 0.0) || !(L > 0.0) || M > L)
    throw ArgumentError("nag_parameters: need 0 < M <= L");
  if (!(stepsize > 0.0)) throw ArgumentError("nag_parameters: stepsize must be positive");
  const double q = std::sqrt(M * stepsize);
  TMParameters p;
  p.M = M;
  p.L = L;
  p.kappa = L / M;
  p.rho = 1.0 - 1.0 / std::sqrt(p.kappa);
  p.alpha = stepsize;
  p.beta = (1.0 - q) / (1.0 + q);
  p.gamma = p.beta;
  p.delta = 0.0;
  p.mu = mu_from_alpha_beta(p.alpha, p.beta);
  return p;
}

TMParameters scaled_alpha(const TMParameters& p, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("scaled_alpha: scale must be positive");
  TMParameters q = p;
  q.alpha = p.alpha * scale;
  q.mu = mu_from_alpha_beta(q.alpha, q.beta);
  return q;
}

double mu_from_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0)) throw ArgumentError("mu_from_alpha_beta: alpha must be positive");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ArgumentError("mu_from_alpha_beta: beta must lie in [0, 1]");
  if (beta == 1.0)
    throw SingularParameterError("mu_from_alpha_beta: undefined at beta = 1");
  const double r = (1.0 - beta) / (std::sqrt(alpha) * (1.0 + beta));
  return r * r;
}

double mu_from_kappa(double kappa, double L) {
  if (!(kappa >= 1.0)) throw ArgumentError("mu_from_kappa: kappa must be >= 1");
  if (!(L > 0.0)) throw ArgumentError("mu_from_kappa: L must be positive");
  const double k = kappa, rk = std::sqrt(kappa);
  const double num = (9.0 * k * k * rk - 6.0 * k * k + k * rk) * L;
  const double den =
      8.0 * k * k * k * rk - 12.0 * k * k * k + 14.0 * k * k * rk - 9.0 * k * k + 4.0 * k * rk - k;
  return num / den;
}

std::vector<MuBoundsRow> mu_bounds_sweep(const std::vector<double>& kappa_grid, double L) {
  if (kappa_grid.empty()) throw ArgumentError("mu_bounds_sweep: empty kappa grid");
  std::vector<MuBoundsRow> rows;
  rows.reserve(kappa_grid.size());
  double prev = 0.0;
  for (double k : kappa_grid) {
    if (!(k >= 1.0)) throw ArgumentError("mu_bounds_sweep: kappa entries must be >= 1");
    if (k < prev) throw ArgumentError("mu_bounds_sweep: kappa grid must be ascending");
    prev = k;
    const double mu = mu_from_kappa(k, L);
    rows.push_back({k, mu / L, mu / (L / k)});
  }
  return rows;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1) throw ArgumentError("log_grid: need at least one point");
  if (!(lo > 0.0) || hi < lo) throw ArgumentError("log_grid: need 0 < lo <= hi");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    g.push_back(lo);
    return g;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1)));
  return g;
}

}  // namespace tmm
