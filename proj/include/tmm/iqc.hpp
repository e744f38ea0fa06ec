#pragma once

#include "tmm/parameters.hpp"
#include "tmm/rates.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace tmm {

/// Base blocks of the linear embedding xi' = A xi + B q with xi = [eps'; eps]
/// and q = grad f(Y); the full system is each block Kronecker-multiplied by I_n.
struct LtiEmbedding {
  Eigen::Matrix2d A0;     ///< [[-2 sqrt(mu), 0], [1, 0]]
  Eigen::Vector2d B0;     ///< [-(1 + sqrt(mu alpha)); 0]
  Eigen::RowVector2d C_Y; ///< output row of Y: [sqrt(alpha) gamma, 1]
  double D0 = 0;
  double mu = 0, alpha = 0, gamma = 0, delta = 0;
};

LtiEmbedding build_embedding(const TMParameters& params);

/// Sector quadratic [[-2ML, L+M], [L+M, -2]] coupling (Y - x*, grad f(Y)).
Eigen::Matrix2d sector_quadratic(double M, double L);

/// The candidate linear matrix inequality at rate p: the 3x3 symmetric matrix
///   [[A'P + PA + p P, PB], [B'P, 0]] + sigma [C 0; 0 1]' Q_f [C 0; 0 1]
/// at the Kronecker-reduced n = 1 level, which must be negative semidefinite.
struct LMIProblem {
  double p_iqc = 0;
  double sigma = 0;
  Eigen::Matrix2d P0;
  Eigen::Matrix3d assembled;
};

LMIProblem assemble_lmi(const LtiEmbedding& emb, const Eigen::Matrix2d& Qf,
                        const Eigen::Matrix2d& P0, double sigma, double p_iqc);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps
/// (off-diagonal mass driven below 1e-14); ascending order.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd A);

/// True iff the maximum eigenvalue is <= tolerance. Throws ArgumentError when
/// the input is asymmetric beyond 1e-12.
bool nsd_check(const Eigen::MatrixXd& S, double tolerance);

struct IqcWitness {
  double sigma = 0;
  Eigen::Matrix2d P0;  ///< normalized so P0(0,0) = 1
};

/// Searches (sigma, P12, P22) inside [0, 1e4] x [-10, 10] x (0, 100] for a
/// witness making the rate-p LMI negative semidefinite with P0 positive
/// definite: a dense deterministic grid with the P22 interval resolved in
/// closed form, then a Nelder-Mead polish when the grid comes up empty.
/// Accepts only witnesses passing nsd_check at -1e-10.
std::optional<IqcWitness> find_feasible_witness(const TMParameters& params, double p_iqc);

struct IqcResult {
  bool found = false;
  RateCertificate cert;
  IqcWitness witness;
};

/// Bisection maximizing the feasible rate over [0, 2 sqrt(L)] (default
/// tolerance 1e-4 sqrt(L)). Returns found = false when even p = 0 has no
/// witness; this is an expected outcome at large condition numbers, not an error.
IqcResult iqc_rate(const TMParameters& params, double tolerance = 0);

struct IqcSweepRow {
  double M = 0, kappa = 0;
  double p_iqc_star = 0, sigma = 0, P11 = 0, P12 = 0, P22 = 0;  // NaN when infeasible
  std::string status;  ///< "ok" or "infeasible_search"
};

std::vector<IqcSweepRow> iqc_sweep(const std::vector<double>& M_list,
                                   const std::vector<double>& kappa_grid,
                                   double tolerance = 0);

}  // namespace tmm
