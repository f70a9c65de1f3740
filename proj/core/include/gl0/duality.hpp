#pragma once

#include "gl0/cd.hpp"
#include "gl0/model.hpp"

namespace gl0::dual {

/// Dual candidate nu_i = -2 r_i / theta_ii with per-column log arguments
/// d_i = -||nu_i||^2/4 - xtilde_i . nu_i. Feasible iff all d_i > 0.
struct DualPoint {
  Eigen::MatrixXd nu;      // n x p
  Eigen::VectorXd logarg;  // d_i
  bool feasible = false;
};

DualPoint build_dual(const ProblemInstance& inst, const SymmetricEstimate& est);

/// Full O(n p^2) evaluation of D(nu) with per-pair conjugate dispatch.
/// -inf if infeasible.
double evaluate_dual_full(const ProblemInstance& inst, const DualPoint& dual,
                          const PenaltySpec& penalties);

/// O(n(|support| + |F1|)) evaluation (valid after active-set termination):
/// conjugates only over `support`, plus lambda0 |F1 \ support|.
double evaluate_dual_sparse(const ProblemInstance& inst, const DualPoint& dual,
                            const PenaltySpec& penalties,
                            const PairSet& support);

struct BoundResult {
  cd::SolveResult primal;
  double lower_bound = -kInf;
};

/// Solve the node relaxation, then construct a dual point; on
/// infeasibility keep iterating with a doubled sweep budget (up to
/// `max_retries`). A -inf bound is a legal degraded outcome.
BoundResult certified_node_bound(const ProblemInstance& inst,
                                 const NodeState& node,
                                 const cd::SolverConfig& config = {},
                                 int max_retries = 5);

}  // namespace gl0::dual
