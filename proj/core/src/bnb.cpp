#include "gl0/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <ostream>

#include "gl0/duality.hpp"
#include "gl0/regularizers.hpp"

namespace gl0::bnb {

double implied_z(double theta, double lambda0, double lambda2, double M) {
  double a = std::abs(theta);
  if (a == 0.0) return 0.0;
  double ratio = lambda2 > 0.0 ? std::sqrt(lambda0 / lambda2)
                               : (lambda0 > 0.0 ? kInf : 0.0);
  if (ratio <= M) {
    if (a >= ratio) return 1.0;
    return std::min(1.0, std::sqrt(lambda2 / lambda0) * a);
  }
  return std::min(1.0, a / M);
}

std::optional<Pair> select_branch_pair(const ProblemInstance& inst,
                                       const NodeState& node,
                                       const SymmetricEstimate& solution,
                                       double int_tol) {
  std::optional<Pair> best;
  double best_dist = kInf;
  // Only pairs in the support can be fractional: z = 0 exactly at theta = 0.
  for (const auto& pr : solution.support()) {
    if (node.zbound(pr.first, pr.second) != ZBound::Relaxed) continue;
    double z = implied_z(solution(pr.first, pr.second), inst.lambda0,
                         inst.lambda2, inst.bigM);
    if (z <= int_tol || z >= 1.0 - int_tol) continue;
    double dist = std::abs(z - 0.5);
    if (dist < best_dist - 1e-15) {  // strict improvement; ties keep lexi-first
      best_dist = dist;
      best = pr;
    }
  }
  return best;
}

std::optional<Incumbent> make_incumbent(const ProblemInstance& inst,
                                        const NodeState& node,
                                        const SymmetricEstimate& relaxation,
                                        IncumbentMode mode,
                                        const cd::SolverConfig& config,
                                        double cutoff) {
  PairSet S;
  for (const auto& pr : relaxation.support()) {
    if (node.zbound(pr.first, pr.second) == ZBound::FixedZero) continue;
    double z = node.zbound(pr.first, pr.second) == ZBound::FixedOne
                   ? 1.0
                   : implied_z(relaxation(pr.first, pr.second), inst.lambda0,
                               inst.lambda2, inst.bigM);
    if (mode == IncumbentMode::Support ? z > 0.0 : z >= 0.5) S.insert(pr);
  }
  for (const auto& pr : node.fixed_one()) S.insert(pr);

  PenaltySpec penalties =
      PenaltySpec::from_instance(inst, PairTag::Forbidden);
  for (const auto& pr : S) penalties.overrides[pr] = PairTag::L0L2Box;

  SymmetricEstimate init = relaxation.restricted_to(inst, S);
  cd::SolveResult fit =
      cd::solve_restricted(inst, penalties, init, S, config);
  double obj = objective_F0(inst, fit.estimate);
  if (!fit.converged && obj > cutoff) return std::nullopt;
  return Incumbent{std::move(fit.estimate), obj};
}

namespace {

PairSet correlation_screen(const ProblemInstance& inst, int per_row) {
  PairSet active;
  if (per_row <= 0) return active;
  // |corr(x_i, x_j)| ranking per row via the gram matrix of scaled columns.
  Eigen::MatrixXd gram = inst.xtilde.transpose() * inst.xtilde;
  for (int i = 0; i < inst.p; ++i) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(inst.p - 1);
    for (int j = 0; j < inst.p; ++j) {
      if (j == i) continue;
      double c = std::abs(gram(i, j)) / std::sqrt(inst.v(i) * inst.v(j));
      scored.emplace_back(-c, j);
    }
    int keep = std::min<int>(per_row, static_cast<int>(scored.size()));
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());
    for (int k = 0; k < keep; ++k)
      active.insert(make_pair_sorted(i, scored[k].second));
  }
  return active;
}

}  // namespace

Incumbent initial_incumbent(const ProblemInstance& inst,
                            const cd::SolverConfig& config,
                            int screen_per_row) {
  PenaltySpec penalties = PenaltySpec::from_instance(inst, PairTag::L0L2Box);
  SymmetricEstimate init = SymmetricEstimate::diagonal(inst);
  PairSet active = correlation_screen(inst, screen_per_row);
  cd::SolveResult fit =
      cd::active_set_solve(inst, penalties, init, active, config);
  double obj = objective_F0(inst, fit.estimate);
  return Incumbent{std::move(fit.estimate), obj};
}

namespace {

void log_node(std::ostream* os, const NodeState& node, double bound,
              const char* pruned, bool improved) {
  if (!os) return;
  (*os) << "{\"id\":" << node.id << ",\"parent\":" << node.parent
        << ",\"depth\":" << node.depth << ",\"bound\":" << bound
        << ",\"pruned\":\"" << pruned << "\",\"incumbent_improved\":"
        << (improved ? "true" : "false") << "}\n";
}

double relative_gap(double upper, double lower) {
  if (std::isinf(lower)) return kInf;
  return (upper - lower) / std::max(std::abs(upper), 1e-12);
}

}  // namespace

BnbResult solve_bnb(const ProblemInstance& inst, const BnbConfig& config) {
  if (std::isinf(inst.bigM))
    throw std::invalid_argument("solve_bnb: finite bigM required");
  if (!(inst.lambda0 > 0.0))
    throw std::invalid_argument("solve_bnb: lambda0 must be positive");

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  BnbResult result{initial_incumbent(inst, config.solver), -kInf, kInf,
                   0,     0,
                   1,     false};

  NodeState root;
  root.warm_support = result.incumbent.solution.support();
  int next_id = 1;
  std::deque<NodeState> queue;
  queue.push_back(std::move(root));

  auto global_lower = [&] {
    double lo = kInf;
    for (const auto& nd : queue) lo = std::min(lo, nd.lower_bound);
    return queue.empty() ? result.incumbent.objective : lo;
  };

  while (!queue.empty()) {
    result.lower_bound = global_lower();
    result.gap = relative_gap(result.incumbent.objective, result.lower_bound);
    if (result.gap <= config.gap_tol) {
      result.converged = true;
      return result;
    }
    if (result.nodes_explored >= config.node_limit ||
        elapsed() >= config.time_limit)
      return result;

    NodeState node;
    if (config.depth_first) {
      node = std::move(queue.back());
      queue.pop_back();
    } else {
      node = std::move(queue.front());
      queue.pop_front();
    }
    ++result.nodes_explored;

    dual::BoundResult nb =
        dual::certified_node_bound(inst, node, config.solver);
    double bound = std::max(node.lower_bound, nb.lower_bound);

    if (bound >= result.incumbent.objective - 1e-9) {
      ++result.nodes_pruned;
      log_node(config.node_log, node, bound, "bound", false);
      continue;
    }

    bool improved = false;
    for (auto mode : {IncumbentMode::Support, IncumbentMode::Rounded}) {
      auto cand = make_incumbent(inst, node, nb.primal.estimate, mode,
                                 config.solver, result.incumbent.objective);
      if (cand && cand->objective < result.incumbent.objective - 1e-12) {
        result.incumbent = std::move(*cand);
        ++result.incumbent_updates;
        improved = true;
      }
    }

    auto branch =
        select_branch_pair(inst, node, nb.primal.estimate, config.int_tol);
    if (!branch) {
      // Integral relaxation: the node is solved exactly; nothing to expand.
      ++result.nodes_pruned;
      log_node(config.node_log, node, bound, "integral", improved);
      continue;
    }
    log_node(config.node_log, node, bound, "", improved);

    for (ZBound fix : {ZBound::FixedZero, ZBound::FixedOne}) {
      NodeState child;
      child.zbounds = node.zbounds;
      child.zbounds[*branch] = fix;
      child.depth = node.depth + 1;
      child.parent = node.id;
      child.id = next_id++;
      child.lower_bound = bound;
      child.warm_support = nb.primal.estimate.support();
      if (fix == ZBound::FixedZero)
        child.warm_support.erase(*branch);
      else
        child.warm_support.insert(*branch);
      child.relaxation_solution = nb.primal.estimate;
      queue.push_back(std::move(child));
    }
  }

  result.lower_bound = result.incumbent.objective;
  result.gap = 0.0;
  result.converged = true;
  return result;
}

}  // namespace gl0::bnb
