#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>

namespace tmm {

using Vec = Eigen::VectorXd;

/// First-order oracle for an M-strongly-convex cost with L-Lipschitz gradient.
/// Oracles are immutable after construction and safe to evaluate concurrently.
struct CostFunction {
  int dimension = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  /// Optional Hessian-vector product (x, v) -> H(x) v; empty when unavailable.
  std::function<Vec(const Vec&, const Vec&)> hessian_vector;
  double M = 0;  ///< strong-convexity constant, 0 < M <= L
  double L = 0;  ///< gradient Lipschitz constant
  std::optional<Vec> minimizer;

  bool has_hessian() const { return static_cast<bool>(hessian_vector); }
  bool has_minimizer() const { return minimizer.has_value(); }

  /// f(x) - f(x*). Throws CapabilityError when no minimizer is stored.
  double error_at(const Vec& x) const;

  /// Hessian-vector product; falls back to central differences of the gradient
  /// with step 1e-5 * (1 + |x|) when no closed form is stored.
  Vec hessian_apply(const Vec& x, const Vec& v) const;
};

/// Strong-convexity inequalities at the pair (x, y), each up to additive slack:
///   [0]  f(y) - f(x) <= grad f(x)'(y-x) + |grad f(y) - grad f(x)|^2 / (2M)
///   [1]  M |y-x|^2   <= (y-x)'(grad f(y) - grad f(x))
///   [2]  M |y-x|     <= |grad f(y) - grad f(x)|
std::array<bool, 3> check_strong_convexity(const CostFunction& f, const Vec& x,
                                           const Vec& y, double slack = 1e-9);

/// Lipschitz-gradient inequalities at the pair (x, y), each up to additive slack:
///   [0]  |grad f(y) - grad f(x)| <= L |y-x|
///   [1]  f(y) - f(x) <= grad f(x)'(y-x) + L |y-x|^2 / 2
///   [2]  f(y) - f(x) >= grad f(x)'(y-x) + |grad f(y) - grad f(x)|^2 / (2L)
std::array<bool, 3> check_lipschitz_gradient(const CostFunction& f, const Vec& x,
                                             const Vec& y, double slack = 1e-9);

/// The 1-D benchmark cost f(x) = x^2 / (2 log(2 + x^2)) - x with the published
/// constants M = 0.038, L = 1.443. Gradient and Hessian are analytic; the
/// minimizer is located once by bisection on the gradient and cached.
CostFunction benchmark_cost();

/// f(x) = 1/2 sum_i d_i x_i^2 with M = min d_i, L = max d_i, minimizer 0.
CostFunction quadratic_cost(const Vec& diag);

/// Smooth non-quadratic zoo member on R^n:
///   f(x) = M/2 |x|^2 + (L - M) sum_i (sqrt(1 + x_i^2) - 1),
/// minimizer 0, curvature in (M, L] with the maximum attained at the origin.
CostFunction smoothed_abs_cost(double M, double L, int dimension);

/// The same cost shifted so its minimizer moves to `minimizer + c`.
CostFunction translate(const CostFunction& f, const Vec& c);

}  // namespace tmm
