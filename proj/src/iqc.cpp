#include "tmm/iqc.hpp"

#include "tmm/errors.hpp"
#include "tmm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kSigmaMax = 1e4;
constexpr double kP12Max = 10.0;
constexpr double kP22Max = 100.0;
constexpr double kNsdTol = -1e-10;

}  // namespace

LtiEmbedding build_embedding(const TMParameters& params) {
  LtiEmbedding e;
  const double sq_mu = std::sqrt(params.mu);
  e.A0 << -2.0 * sq_mu, 0.0, 1.0, 0.0;
  e.B0 << -(1.0 + std::sqrt(params.mu * params.alpha)), 0.0;
  e.C_Y << std::sqrt(params.alpha) * params.gamma, 1.0;
  e.D0 = 0.0;
  e.mu = params.mu;
  e.alpha = params.alpha;
  e.gamma = params.gamma;
  e.delta = params.delta;
  return e;
}

Eigen::Matrix2d sector_quadratic(double M, double L) {
  if (!(0.0 < M && M <= L)) throw ArgumentError("sector_quadratic: need 0 < M <= L");
  Eigen::Matrix2d q;
  q << -2.0 * M * L, L + M, L + M, -2.0;
  return q;
}

LMIProblem assemble_lmi(const LtiEmbedding& emb, const Eigen::Matrix2d& Qf,
                        const Eigen::Matrix2d& P0, double sigma, double p_iqc) {
  if (std::abs(P0(0, 1) - P0(1, 0)) > 1e-12)
    throw ArgumentError("assemble_lmi: P0 is not symmetric");
  if (!(sigma >= 0.0)) throw ArgumentError("assemble_lmi: sigma must be >= 0");
  if (!(p_iqc >= 0.0)) throw ArgumentError("assemble_lmi: p_iqc must be >= 0");
  LMIProblem prob;
  prob.p_iqc = p_iqc;
  prob.sigma = sigma;
  prob.P0 = P0;
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  s.topLeftCorner<2, 2>() = emb.A0.transpose() * P0 + P0 * emb.A0 + p_iqc * P0;
  s.topRightCorner<2, 1>() = P0 * emb.B0;
  s.bottomLeftCorner<1, 2>() = (P0 * emb.B0).transpose();
  // multiplier rows: [C_Y  D0; 0  1] maps (xi, q) to (Y - x*, q)
  Eigen::Matrix<double, 2, 3> m = Eigen::Matrix<double, 2, 3>::Zero();
  m.block<1, 2>(0, 0) = emb.C_Y;
  m(0, 2) = emb.D0;
  m(1, 2) = 1.0;
  s += sigma * m.transpose() * Qf * m;
  prob.assembled = 0.5 * (s + s.transpose());
  return prob;
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd A) {
  const long n = A.rows();
  if (n != A.cols()) throw ArgumentError("jacobi_eigenvalues: matrix must be square");
  const double scale = std::max(1.0, A.norm());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) off += 2.0 * A(p, q) * A(p, q);
    if (std::sqrt(off) <= 1e-14 * scale) break;
    for (long p = 0; p < n; ++p) {
      for (long q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (long i = 0; i < n; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (long i = 0; i < n; ++i) {
          const double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  Eigen::VectorXd ev = A.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

bool nsd_check(const Eigen::MatrixXd& S, double tolerance) {
  if (S.rows() != S.cols()) throw ArgumentError("nsd_check: matrix must be square");
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ArgumentError("nsd_check: matrix is not symmetric");
  const Eigen::VectorXd ev = jacobi_eigenvalues(S);
  return ev(ev.size() - 1) <= tolerance;
}

namespace {

struct SchurConsts {
  double a, b, c1, q11, q12;
};

SchurConsts schur_consts(const TMParameters& p) {
  return {2.0 * std::sqrt(p.mu), 1.0 + std::sqrt(p.mu * p.alpha),
          std::sqrt(p.alpha) * p.gamma, -2.0 * p.M * p.L, p.L + p.M};
}

// For fixed (p, sigma, p12) with P11 = 1 the LMI is negative semidefinite iff
// p22 lies in an explicitly computable interval (Schur complement on the -2 sigma
// corner). Returns the interval midpoint as the candidate, or nothing.
std::optional<double> feasible_p22(const SchurConsts& c, double p, double sigma, double p12) {
  if (!(sigma > 0.0)) return std::nullopt;
  const double margin = 1e-9;
  const double u1 = -c.b + sigma * c.q12 * c.c1;
  const double u2 = -c.b * p12 + sigma * c.q12;
  const double w11 = 2.0 * (p12 - c.a) + p + sigma * c.q11 * c.c1 * c.c1 + u1 * u1 / (2.0 * sigma);
  if (w11 > -margin) return std::nullopt;
  const double r0 = (p - c.a) * p12 + sigma * c.q11 * c.c1 + u1 * u2 / (2.0 * sigma);
  const double w0 = sigma * c.q11 + u2 * u2 / (2.0 * sigma);
  double lo = p12 * p12 + 1e-10, hi = kP22Max;
  if (p > 0.0)
    hi = std::min(hi, -w0 / p);  // W22 = p p22 + w0 <= 0
  else if (w0 > -margin)
    return std::nullopt;
  if (hi < lo) return std::nullopt;
  // det W >= 0: -(p22 + r0)^2 + w11 (p p22 + w0) >= 0, a downward parabola in p22
  const double b2 = w11 * p - 2.0 * r0, c2 = w11 * w0 - r0 * r0;
  const double disc = b2 * b2 + 4.0 * c2;  // quadratic p22^2 - b2 p22 - c2 <= 0
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  lo = std::max(lo, 0.5 * (b2 - sq));
  hi = std::min(hi, 0.5 * (b2 + sq));
  if (lo > hi) return std::nullopt;
  return 0.5 * (lo + hi);
}

double lmi_max_eigenvalue(const LtiEmbedding& emb, const Eigen::Matrix2d& Qf, double p_iqc,
                          double sigma, double p12, double p22) {
  Eigen::Matrix2d P0;
  P0 << 1.0, p12, p12, p22;
  const LMIProblem prob = assemble_lmi(emb, Qf, P0, sigma, p_iqc);
  const Eigen::VectorXd ev = jacobi_eigenvalues(prob.assembled);
  return ev(2);
}

bool p0_positive(double p12, double p22) {
  return p22 > 0.0 && p22 - p12 * p12 > 1e-12;
}

bool in_box(double sigma, double p12, double p22) {
  return sigma > 0.0 && sigma <= kSigmaMax && std::abs(p12) <= kP12Max && p22 > 0.0 &&
         p22 <= kP22Max;
}

// Deterministic Nelder-Mead on (log sigma, p12, p22) maximizing the
// feasibility margin -lambda_max, used as a polish when the grid finds nothing.
std::optional<IqcWitness> nelder_mead_rescue(const LtiEmbedding& emb, const Eigen::Matrix2d& Qf,
                                             double p_iqc, double sigma0, double p12_0,
                                             double p22_0) {
  using Point = Eigen::Vector3d;
  const auto objective = [&](const Point& x) {
    const double sigma = std::exp(x[0]), p12 = x[1], p22 = x[2];
    if (!in_box(sigma, p12, p22) || !p0_positive(p12, p22)) return -1e6;
    return -lmi_max_eigenvalue(emb, Qf, p_iqc, sigma, p12, p22);
  };
  std::array<Point, 4> simplex;
  simplex[0] << std::log(sigma0), p12_0, p22_0;
  simplex[1] = simplex[0] + Point(0.3, 0.0, 0.0);
  simplex[2] = simplex[0] + Point(0.0, 0.05 + 0.1 * std::abs(p12_0), 0.0);
  simplex[3] = simplex[0] + Point(0.0, 0.0, 0.05 + 0.1 * p22_0);
  std::array<double, 4> val;
  for (int i = 0; i < 4; ++i) val[i] = objective(simplex[i]);
  for (int iter = 0; iter < 300; ++iter) {
    std::array<int, 4> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] > val[b]; });
    const int best = order[0], worst = order[3], second = order[2];
    if (val[best] - val[worst] < 1e-15 * (1.0 + std::abs(val[best]))) break;
    const Point centroid =
        (simplex[order[0]] + simplex[order[1]] + simplex[order[2]]) / 3.0;
    const Point reflected = centroid + (centroid - simplex[worst]);
    const double fr = objective(reflected);
    if (fr > val[best]) {
      const Point expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = objective(expanded);
      if (fe > fr) {
        simplex[worst] = expanded;
        val[worst] = fe;
      } else {
        simplex[worst] = reflected;
        val[worst] = fr;
      }
    } else if (fr > val[second]) {
      simplex[worst] = reflected;
      val[worst] = fr;
    } else {
      const Point contracted = centroid + 0.5 * (simplex[worst] - centroid);
      const double fc = objective(contracted);
      if (fc > val[worst]) {
        simplex[worst] = contracted;
        val[worst] = fc;
      } else {
        for (int i = 0; i < 4; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
          val[i] = objective(simplex[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (val[i] > val[best]) best = i;
  const double sigma = std::exp(simplex[best][0]), p12 = simplex[best][1],
               p22 = simplex[best][2];
  if (val[best] >= -kNsdTol && in_box(sigma, p12, p22) && p0_positive(p12, p22)) {
    IqcWitness w;
    w.sigma = sigma;
    w.P0 << 1.0, p12, p12, p22;
    return w;
  }
  return std::nullopt;
}

}  // namespace

std::optional<IqcWitness> find_feasible_witness(const TMParameters& params, double p_iqc) {
  if (!(p_iqc >= 0.0)) throw ArgumentError("find_feasible_witness: p_iqc must be >= 0");
  const SchurConsts c = schur_consts(params);
  const LtiEmbedding emb = build_embedding(params);
  const Eigen::Matrix2d qf = sector_quadratic(params.M, params.L);

  // sigma is scanned around the scale balancing the (1,3) entry; p12 around the
  // scale sigma (sqrt(L) - sqrt(M))^2 / (1 + sqrt(mu alpha)) suggested by the
  // off-diagonal cancellation. Both grids are clipped to the search box.
  const double sigma0 = c.c1 > 0.0 ? std::min(c.b / (c.c1 * c.q12), kSigmaMax) : 1.0;
  const int n_sigma = 200, n_p12 = 200;
  double lo = std::log(std::max(sigma0 * 1e-3, 1e-8)),
         hi = std::log(std::min(sigma0 * 1e3, kSigmaMax));
  if (!(hi > lo)) {
    lo = std::log(1e-4);
    hi = std::log(kSigmaMax);
  }

  double best_margin = -std::numeric_limits<double>::infinity();
  double bs = sigma0, b12 = 0.1, b22 = 1.0;
  for (int i = 0; i < n_sigma; ++i) {
    const double sigma = std::exp(lo + (hi - lo) * i / (n_sigma - 1));
    const double p12_cap =
        std::min(4.0 * sigma * std::pow(std::sqrt(params.L) - std::sqrt(params.M), 2) / c.b,
                 kP12Max);
    for (int j = 0; j < n_p12; ++j) {
      const double p12 = p12_cap * j / (n_p12 - 1);
      const auto p22 = feasible_p22(c, p_iqc, sigma, p12);
      if (!p22) continue;
      const double lam = lmi_max_eigenvalue(emb, qf, p_iqc, sigma, p12, *p22);
      if (-lam > best_margin) {
        best_margin = -lam;
        bs = sigma;
        b12 = p12;
        b22 = *p22;
      }
      if (lam <= kNsdTol && p0_positive(p12, *p22) && in_box(sigma, p12, *p22)) {
        IqcWitness w;
        w.sigma = sigma;
        w.P0 << 1.0, p12, p12, *p22;
        return w;
      }
    }
  }
  return nelder_mead_rescue(emb, qf, p_iqc, bs, b12, std::max(b22, b12 * b12 + 1e-6));
}

IqcResult iqc_rate(const TMParameters& params, double tolerance) {
  const double sq_L = std::sqrt(params.L);
  if (tolerance <= 0.0) tolerance = 1e-4 * sq_L;
  IqcResult result;
  auto witness = find_feasible_witness(params, 0.0);
  if (!witness) return result;  // explicit no-certificate outcome

  double lo = 0.0, hi = 2.0 * sq_L;
  if (auto w_hi = find_feasible_witness(params, hi)) {
    lo = hi;
    witness = w_hi;
  } else {
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (auto w = find_feasible_witness(params, mid)) {
        lo = mid;
        witness = w;
      } else {
        hi = mid;
      }
    }
  }
  result.found = true;
  result.witness = *witness;
  result.cert.rate = lo;
  result.cert.source = RateSource::iqc;
  result.cert.mu = params.mu;
  result.cert.alpha = params.alpha;
  result.cert.gamma = params.gamma;
  result.cert.kappa = params.kappa;
  result.cert.L = params.L;
  result.cert.M = params.M;
  result.cert.tolerance = tolerance;
  return result;
}

std::vector<IqcSweepRow> iqc_sweep(const std::vector<double>& M_list,
                                   const std::vector<double>& kappa_grid, double tolerance) {
  if (M_list.empty() || kappa_grid.empty())
    throw ArgumentError("iqc_sweep: M list and kappa grid must be nonempty");
  std::vector<IqcSweepRow> rows;
  rows.reserve(M_list.size() * kappa_grid.size());
  for (double M : M_list) {
    for (double kappa : kappa_grid) {
      if (!(M > 0.0) || !(kappa >= 1.0))
        throw ArgumentError("iqc_sweep: need M > 0 and kappa >= 1");
      const TMParameters params = tm_parameters(M, M * kappa);
      const IqcResult r = iqc_rate(params, tolerance);
      IqcSweepRow row;
      row.M = M;
      row.kappa = kappa;
      if (r.found) {
        row.p_iqc_star = r.cert.rate;
        row.sigma = r.witness.sigma;
        row.P11 = r.witness.P0(0, 0);
        row.P12 = r.witness.P0(0, 1);
        row.P22 = r.witness.P0(1, 1);
        row.status = "ok";
      } else {
        row.p_iqc_star = row.sigma = row.P11 = row.P12 = row.P22 = kNan;
        row.status = "infeasible_search";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace tmm
