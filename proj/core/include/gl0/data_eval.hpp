#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gl0/cd.hpp"
#include "gl0/model.hpp"

namespace gl0::data {

struct GroundTruth {
  Eigen::MatrixXd theta;  // symmetric positive definite, unit-variance inverse
  std::string generator;  // "uniform" or "banded"
  int k = 0;
  double cond_target = 0.0;
  std::uint64_t seed = 0;
};

/// Uniform sparsity: B entries 0.5 w.p. k/(2p), symmetrized, delta*I added
/// by bisection to hit the condition-number target, then rescaled so the
/// inverse has unit diagonal.
GroundTruth generate_uniform(int p, int k, double cond_target,
                             std::uint64_t seed);

/// Banded precision: b_ij = 0.5^|i-j| for |i-j| <= k/2 (k even), delta and
/// normalization as above. Interior columns have exactly k+1 nonzeros.
GroundTruth generate_banded(int p, int k, double cond_target,
                            std::uint64_t seed);

/// n i.i.d. rows from N(0, theta^{-1}). Deterministic given seed.
Eigen::MatrixXd sample_gaussian(const GroundTruth& truth, int n,
                                std::uint64_t seed);

/// Matthews correlation coefficient of the off-diagonal supports; 0 when
/// the denominator vanishes.
double mcc(const Eigen::MatrixXd& theta_star, const Eigen::MatrixXd& theta_hat);

struct Metrics {
  double frob_rel = 0.0;
  double mcc = 0.0;
  long nnz = 0;  // all nonzero entries, diagonal included
};
Metrics eval_metrics(const Eigen::MatrixXd& theta_star,
                     const Eigen::MatrixXd& theta_hat);

/// Validation pseudo-likelihood loss sum_i(-log theta_ii +
/// ||Xval_tilde theta_i||^2 / theta_ii) with Xval scaled by 1/sqrt(n_val).
double validation_loss(const Eigen::MatrixXd& val_data,
                       const Eigen::MatrixXd& theta);

struct GridSpec {
  int n_lambda0 = 4;
  int n_lambda2 = 4;
  // Default range sqrt(log p / n) * [1/100, 100], log-spaced, filled in
  // from the training data when lo/hi are unset (<= 0).
  double lo = 0.0;
  double hi = 0.0;
};

enum class SolveMode { Heuristic, Exact };

struct GridPoint {
  double lambda0 = 0.0;
  double lambda2 = 0.0;
  double val_loss = kInf;
  long nnz = 0;
  bool converged = false;
};

struct TuneResult {
  double lambda0 = 0.0;
  double lambda2 = 0.0;
  Eigen::MatrixXd theta;
  double val_loss = kInf;
  std::vector<GridPoint> table;
};

/// Fit every (lambda0, lambda2) grid point on `train`, pick the minimizer
/// of the validation loss (ties -> sparsest). Unconverged points are
/// recorded but excluded; throws when all points are excluded.
TuneResult tune_grid(const Eigen::MatrixXd& train, const Eigen::MatrixXd& val,
                     const GridSpec& grid, SolveMode mode, double bigM,
                     const cd::SolverConfig& config = {}, double gap_tol = 0.05,
                     int threads = 1);

}  // namespace gl0::data
