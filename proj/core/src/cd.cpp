#include "gl0/cd.hpp"

#include <cmath>

#include "gl0/regularizers.hpp"

namespace gl0::cd {

namespace {

// Quadratic coefficients of the coordinate problem at (i, j):
//   a = v_j/theta_ii + v_i/theta_jj
//   b = 2 x_j.(r_i - theta_ij x_j)/theta_ii + 2 x_i.(r_j - theta_ij x_i)/theta_jj
struct Coeffs {
  double a;
  double b;
};

Coeffs coordinate_coeffs(const ProblemInstance& inst,
                         const SymmetricEstimate& est, int i, int j) {
  double tii = est.diag(i);
  double tjj = est.diag(j);
  double tij = est(i, j);
  const auto& X = inst.xtilde;
  const auto& R = est.residuals();
  double a = inst.v(j) / tii + inst.v(i) / tjj;
  double b = 2.0 * (X.col(j).dot(R.col(i)) - tij * inst.v(j)) / tii +
             2.0 * (X.col(i).dot(R.col(j)) - tij * inst.v(i)) / tjj;
  return {a, b};
}

}  // namespace

double update_offdiagonal(const ProblemInstance& inst, SymmetricEstimate& est,
                          int i, int j, const PenaltySpec& penalties) {
  auto [a, b] = coordinate_coeffs(inst, est, i, j);
  double next = reg::quad_oracle(a, b, penalties.tag(i, j), penalties.lambda0,
                                 penalties.lambda2, penalties.bigM);
  est.set_offdiag(inst, i, j, next);
  return next;
}

double update_diagonal(const ProblemInstance& inst, SymmetricEstimate& est,
                       int i) {
  double tii = est.diag(i);
  double e2 = (est.residuals().col(i) - tii * inst.xtilde.col(i)).squaredNorm();
  double vi = inst.v(i);
  double next = (1.0 + std::sqrt(1.0 + 4.0 * vi * e2)) / (2.0 * vi);
  est.set_diag(inst, i, next);
  return next;
}

double cd_sweep(const ProblemInstance& inst, SymmetricEstimate& est,
                const PenaltySpec& penalties, const PairSet& restriction) {
  for (const auto& [i, j] : restriction)
    update_offdiagonal(inst, est, i, j, penalties);
  for (int i = 0; i < inst.p; ++i) update_diagonal(inst, est, i);
  return objective_unified(inst, est, penalties);
}

PairSet scan_violations(const ProblemInstance& inst,
                        const SymmetricEstimate& est,
                        const PenaltySpec& penalties, const PairSet& active) {
  PairSet violations;
  // G(j, i) = x_j . r_i; one matrix product instead of O(p^2) dots.
  Eigen::MatrixXd G = inst.xtilde.transpose() * est.residuals();
  for (int i = 0; i < inst.p; ++i) {
    for (int j = i + 1; j < inst.p; ++j) {
      if (active.count({i, j})) continue;
      PairTag tag = penalties.tag(i, j);
      if (tag == PairTag::FixedZero || tag == PairTag::Forbidden) continue;
      if (est(i, j) != 0.0) {
        violations.insert({i, j});  // nonzero outside the active set
        continue;
      }
      double tii = est.diag(i);
      double tjj = est.diag(j);
      double a = inst.v(j) / tii + inst.v(i) / tjj;
      double b = 2.0 * G(j, i) / tii + 2.0 * G(i, j) / tjj;
      if (reg::quad_oracle(a, b, tag, penalties.lambda0, penalties.lambda2,
                           penalties.bigM) != 0.0)
        violations.insert({i, j});
    }
  }
  return violations;
}

SolveResult solve_restricted(const ProblemInstance& inst,
                             const PenaltySpec& penalties,
                             const SymmetricEstimate& init,
                             const PairSet& restriction,
                             const SolverConfig& config) {
  SolveResult result{init, objective_unified(inst, init, penalties), 0, false};
  double prev = result.objective;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    if (config.residual_refresh_period > 0 &&
        sweep % config.residual_refresh_period == 0)
      result.estimate.refresh_residuals(inst);
    double obj = cd_sweep(inst, result.estimate, penalties, restriction);
    result.sweeps = sweep;
    result.objective = obj;
    if (config.on_sweep) config.on_sweep(sweep, obj);
    double denom = std::max(std::abs(prev), 1e-12);
    if (std::abs(prev - obj) / denom < config.rel_obj_tol) {
      result.converged = true;
      break;
    }
    prev = obj;
  }
  return result;
}

SolveResult active_set_solve(const ProblemInstance& inst,
                             const PenaltySpec& penalties,
                             const SymmetricEstimate& init,
                             const PairSet& initial_active,
                             const SolverConfig& config) {
  PairSet active = initial_active;
  for (const auto& [pr, tag] : penalties.overrides)
    if (tag == PairTag::FixedOne) active.insert(pr);

  SolveResult result{init, kInf, 0, false};
  const SymmetricEstimate* start = &init;
  int total_sweeps = 0;
  for (int round = 0; round < config.max_active_rounds; ++round) {
    SolverConfig inner = config;
    inner.max_sweeps = std::max(1, config.max_sweeps - total_sweeps);
    SolveResult sub = solve_restricted(inst, penalties, *start, active, inner);
    total_sweeps += sub.sweeps;
    result.estimate = std::move(sub.estimate);
    result.objective = sub.objective;
    result.sweeps = total_sweeps;
    result.converged = sub.converged;
    start = &result.estimate;
    PairSet violations =
        scan_violations(inst, result.estimate, penalties, active);
    if (violations.empty()) return result;
    active.insert(violations.begin(), violations.end());
    result.converged = false;
    if (total_sweeps >= config.max_sweeps) break;
  }
  return result;
}

}  // namespace gl0::cd
