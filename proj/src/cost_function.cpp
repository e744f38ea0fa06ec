#include "tmm/cost_function.hpp"

#include "tmm/errors.hpp"

#include <cmath>

namespace tmm {

namespace {

void require_dim(const CostFunction& f, const Vec& x, const char* what) {
  if (x.size() != f.dimension)
    throw ArgumentError(std::string(what) + ": point dimension " +
                        std::to_string(x.size()) + " does not match cost dimension " +
                        std::to_string(f.dimension));
}

}  // namespace

double CostFunction::error_at(const Vec& x) const {
  if (!minimizer) throw CapabilityError("error_at: cost has no stored minimizer");
  return value(x) - value(*minimizer);
}

Vec CostFunction::hessian_apply(const Vec& x, const Vec& v) const {
  if (hessian_vector) return hessian_vector(x, v);
  const double h = 1e-5 * (1.0 + x.norm());
  return (gradient(x + h * v) - gradient(x - h * v)) / (2.0 * h);
}

std::array<bool, 3> check_strong_convexity(const CostFunction& f, const Vec& x,
                                           const Vec& y, double slack) {
  require_dim(f, x, "check_strong_convexity");
  require_dim(f, y, "check_strong_convexity");
  const Vec gx = f.gradient(x), gy = f.gradient(y);
  const Vec dxy = y - x, dg = gy - gx;
  const double fy_fx = f.value(y) - f.value(x);
  const bool a = fy_fx <= gx.dot(dxy) + dg.squaredNorm() / (2.0 * f.M) + slack;
  const bool b = f.M * dxy.squaredNorm() <= dxy.dot(dg) + slack;
  const bool c = f.M * dxy.norm() <= dg.norm() + slack;
  return {a, b, c};
}

std::array<bool, 3> check_lipschitz_gradient(const CostFunction& f, const Vec& x,
                                             const Vec& y, double slack) {
  require_dim(f, x, "check_lipschitz_gradient");
  require_dim(f, y, "check_lipschitz_gradient");
  const Vec gx = f.gradient(x), gy = f.gradient(y);
  const Vec dxy = y - x, dg = gy - gx;
  const double fy_fx = f.value(y) - f.value(x);
  const bool a = dg.norm() <= f.L * dxy.norm() + slack;
  const bool b = fy_fx <= gx.dot(dxy) + 0.5 * f.L * dxy.squaredNorm() + slack;
  const bool c = fy_fx >= gx.dot(dxy) + dg.squaredNorm() / (2.0 * f.L) - slack;
  return {a, b, c};
}

namespace {

double bench_value(double x) { return x * x / (2.0 * std::log(2.0 + x * x)) - x; }

double bench_deriv(double x) {
  const double w = 2.0 + x * x;
  const double u = std::log(w);
  return x / u - x * x * x / (w * u * u) - 1.0;
}

double bench_second_deriv(double x) {
  const double w = 2.0 + x * x;
  const double u = std::log(w);
  return 1.0 / u - 5.0 * x * x / (w * u * u) +
         2.0 * x * x * x * x * (u + 2.0) / (w * w * u * u * u);
}

// The derivative is -1 at 0 and positive for large x; bisect to one ulp.
double bench_minimizer() {
  double lo = 0.0, hi = 8.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (bench_deriv(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CostFunction benchmark_cost() {
  static const double xstar = bench_minimizer();
  CostFunction f;
  f.dimension = 1;
  f.M = 0.038;
  f.L = 1.443;
  f.value = [](const Vec& x) { return bench_value(x[0]); };
  f.gradient = [](const Vec& x) {
    Vec g(1);
    g[0] = bench_deriv(x[0]);
    return g;
  };
  f.hessian_vector = [](const Vec& x, const Vec& v) {
    Vec hv(1);
    hv[0] = bench_second_deriv(x[0]) * v[0];
    return hv;
  };
  Vec m(1);
  m[0] = xstar;
  f.minimizer = m;
  return f;
}

CostFunction quadratic_cost(const Vec& diag) {
  if (diag.size() == 0) throw ArgumentError("quadratic_cost: empty diagonal");
  if ((diag.array() <= 0.0).any())
    throw ArgumentError("quadratic_cost: diagonal entries must be positive");
  CostFunction f;
  f.dimension = static_cast<int>(diag.size());
  f.M = diag.minCoeff();
  f.L = diag.maxCoeff();
  f.value = [diag](const Vec& x) { return 0.5 * (diag.array() * x.array().square()).sum(); };
  f.gradient = [diag](const Vec& x) -> Vec { return diag.array() * x.array(); };
  f.hessian_vector = [diag](const Vec&, const Vec& v) -> Vec { return diag.array() * v.array(); };
  f.minimizer = Vec::Zero(diag.size());
  return f;
}

CostFunction smoothed_abs_cost(double M, double L, int dimension) {
  if (!(0.0 < M && M <= L)) throw ArgumentError("smoothed_abs_cost: need 0 < M <= L");
  if (dimension < 1) throw ArgumentError("smoothed_abs_cost: dimension must be positive");
  CostFunction f;
  f.dimension = dimension;
  f.M = M;
  f.L = L;
  const double r = L - M;
  f.value = [M, r](const Vec& x) {
    return 0.5 * M * x.squaredNorm() + r * ((x.array().square() + 1.0).sqrt() - 1.0).sum();
  };
  f.gradient = [M, r](const Vec& x) -> Vec {
    return M * x.array() + r * x.array() / (x.array().square() + 1.0).sqrt();
  };
  f.hessian_vector = [M, r](const Vec& x, const Vec& v) -> Vec {
    const auto w = (x.array().square() + 1.0);
    return (M + r / (w * w.sqrt())) * v.array();
  };
  f.minimizer = Vec::Zero(dimension);
  return f;
}

CostFunction translate(const CostFunction& f, const Vec& c) {
  if (c.size() != f.dimension) throw ArgumentError("translate: shift dimension mismatch");
  CostFunction g = f;
  g.value = [f, c](const Vec& x) { return f.value(x - c); };
  g.gradient = [f, c](const Vec& x) { return f.gradient(x - c); };
  if (f.hessian_vector)
    g.hessian_vector = [f, c](const Vec& x, const Vec& v) { return f.hessian_vector(x - c, v); };
  if (f.minimizer) g.minimizer = *f.minimizer + c;
  return g;
}

}  // namespace tmm
