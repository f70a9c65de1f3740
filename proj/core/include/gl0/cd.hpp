#pragma once

#include <functional>

#include "gl0/model.hpp"

namespace gl0::cd {

struct SolverConfig {
  double rel_obj_tol = 1e-6;
  int max_sweeps = 500;
  int max_active_rounds = 20;
  int residual_refresh_period = 50;  // full sweeps between refreshes
  /// Optional progress hook: (sweep index, objective).
  std::function<void(int, double)> on_sweep;
};

struct SolveResult {
  SymmetricEstimate estimate;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
};

/// One off-diagonal coordinate update (i < j). Sets theta_ij to the
/// quadratic-oracle minimizer and maintains residuals in O(n). Returns the
/// new value.
double update_offdiagonal(const ProblemInstance& inst, SymmetricEstimate& est,
                          int i, int j, const PenaltySpec& penalties);

/// One diagonal update: theta_ii <- (1 + sqrt(1 + 4 v_i ||e_i||^2)) /
/// (2 v_i) with e_i = r_i - theta_ii xtilde_i. Returns the new value.
double update_diagonal(const ProblemInstance& inst, SymmetricEstimate& est,
                       int i);

/// One full pass: restricted off-diagonal pairs in ascending (i,j) order,
/// then all diagonals. Returns the unified objective afterwards.
double cd_sweep(const ProblemInstance& inst, SymmetricEstimate& est,
                const PenaltySpec& penalties, const PairSet& restriction);

/// Pairs outside `active` whose coordinate problem has a nonzero
/// minimizer at the current point. FixedZero/Forbidden pairs never
/// violate.
PairSet scan_violations(const ProblemInstance& inst,
                        const SymmetricEstimate& est,
                        const PenaltySpec& penalties, const PairSet& active);

/// Run cd_sweep on `restriction` until the relative objective change drops
/// below rel_obj_tol or max_sweeps is hit (converged flag reports which).
SolveResult solve_restricted(const ProblemInstance& inst,
                             const PenaltySpec& penalties,
                             const SymmetricEstimate& init,
                             const PairSet& restriction,
                             const SolverConfig& config = {});

/// Alternate solve_restricted and scan_violations until no violations
/// remain or max_active_rounds is exhausted.
SolveResult active_set_solve(const ProblemInstance& inst,
                             const PenaltySpec& penalties,
                             const SymmetricEstimate& init,
                             const PairSet& initial_active,
                             const SolverConfig& config = {});

}  // namespace gl0::cd
