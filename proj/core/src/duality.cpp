#include "gl0/duality.hpp"

#include <cmath>

#include "gl0/regularizers.hpp"

namespace gl0::dual {

DualPoint build_dual(const ProblemInstance& inst,
                     const SymmetricEstimate& est) {
  DualPoint out;
  out.nu.resize(inst.n, inst.p);
  out.logarg.resize(inst.p);
  out.feasible = true;
  for (int i = 0; i < inst.p; ++i) {
    out.nu.col(i) = -2.0 * est.residuals().col(i) / est.diag(i);
    out.logarg(i) = -out.nu.col(i).squaredNorm() / 4.0 -
                    inst.xtilde.col(i).dot(out.nu.col(i));
    if (!(out.logarg(i) > 0.0)) out.feasible = false;
  }
  return out;
}

namespace {

double log_terms(const ProblemInstance& inst, const DualPoint& dual) {
  double total = static_cast<double>(inst.p);
  for (int i = 0; i < inst.p; ++i) total += std::log(dual.logarg(i));
  return total;
}

double conjugate_at(const ProblemInstance& inst, const DualPoint& dual,
                    const PenaltySpec& penalties, int i, int j) {
  double alpha = inst.xtilde.col(j).dot(dual.nu.col(i)) +
                 inst.xtilde.col(i).dot(dual.nu.col(j));
  return reg::penalty_conjugate(alpha, penalties.tag(i, j), penalties.lambda0,
                                penalties.lambda2, penalties.bigM);
}

}  // namespace

double evaluate_dual_full(const ProblemInstance& inst, const DualPoint& dual,
                          const PenaltySpec& penalties) {
  if (!dual.feasible) return -kInf;
  double total = log_terms(inst, dual);
  for (int i = 0; i < inst.p; ++i)
    for (int j = i + 1; j < inst.p; ++j)
      total -= conjugate_at(inst, dual, penalties, i, j);
  return total;
}

double evaluate_dual_sparse(const ProblemInstance& inst, const DualPoint& dual,
                            const PenaltySpec& penalties,
                            const PairSet& support) {
  if (!dual.feasible) return -kInf;
  double total = log_terms(inst, dual);
  for (const auto& [i, j] : support)
    total -= conjugate_at(inst, dual, penalties, i, j);
  for (const auto& [pr, tag] : penalties.overrides) {
    if (tag == PairTag::FixedOne && !support.count(pr))
      total += penalties.lambda0;  // conjugate is exactly -lambda0 there
  }
  return total;
}

BoundResult certified_node_bound(const ProblemInstance& inst,
                                 const NodeState& node,
                                 const cd::SolverConfig& config,
                                 int max_retries) {
  PenaltySpec penalties = node.penalties(inst);
  PairSet active = node.warm_support;
  for (const auto& pr : node.fixed_one()) active.insert(pr);
  for (const auto& pr : node.fixed_zero()) active.erase(pr);

  SymmetricEstimate init =
      node.relaxation_solution
          ? node.relaxation_solution->restricted_to(
                inst, [&] {
                  PairSet keep;
                  for (const auto& pr : node.relaxation_solution->support())
                    if (node.zbound(pr.first, pr.second) != ZBound::FixedZero)
                      keep.insert(pr);
                  return keep;
                }())
          : SymmetricEstimate::diagonal(inst);

  BoundResult out{cd::active_set_solve(inst, penalties, init, active, config),
                  -kInf};
  cd::SolverConfig retry_cfg = config;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    DualPoint dp = build_dual(inst, out.primal.estimate);
    if (dp.feasible) {
      double bound =
          out.primal.converged
              ? evaluate_dual_sparse(inst, dp, penalties,
                                     out.primal.estimate.support())
              : evaluate_dual_full(inst, dp, penalties);
#ifndef NDEBUG
      if (out.primal.converged) {
        double full = evaluate_dual_full(inst, dp, penalties);
        if (std::abs(bound - full) >
            1e-8 * std::max(1.0, std::abs(full)))
          throw std::logic_error("sparse/full dual bound mismatch");
      }
#endif
      out.lower_bound = std::max(out.lower_bound, bound);
      break;
    }
    if (attempt == max_retries) break;
    retry_cfg.max_sweeps *= 2;
    out.primal = cd::active_set_solve(inst, penalties, out.primal.estimate,
                                      active, retry_cfg);
  }
  return out;
}

}  // namespace gl0::dual
