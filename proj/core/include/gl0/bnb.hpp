#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "gl0/cd.hpp"
#include "gl0/model.hpp"

namespace gl0::bnb {

/// Optimal indicator z for a given theta in the interval relaxation:
/// sqrt(lambda2/lambda0)|theta| on the linear branch, 1 on the quadratic
/// branch, |theta|/M in the big-M regime.
double implied_z(double theta, double lambda0, double lambda2, double M);

/// Maximum-fractional branching: the Relaxed pair whose implied z is
/// closest to 0.5; lexicographically smallest on ties. nullopt when every
/// implied z is within `int_tol` of {0, 1}.
std::optional<Pair> select_branch_pair(const ProblemInstance& inst,
                                       const NodeState& node,
                                       const SymmetricEstimate& solution,
                                       double int_tol = 1e-6);

enum class IncumbentMode { Support, Rounded };

/// Solve the l0l2-restricted problem on the support implied by the node
/// relaxation (z > 0 or z >= 0.5), initialized with the relaxation
/// solution restricted to that support. nullopt when the CD run is
/// unconverged and worse than `cutoff`.
std::optional<Incumbent> make_incumbent(const ProblemInstance& inst,
                                        const NodeState& node,
                                        const SymmetricEstimate& relaxation,
                                        IncumbentMode mode,
                                        const cd::SolverConfig& config = {},
                                        double cutoff = kInf);

/// Root incumbent: diagonal init, correlation-screened initial active set,
/// l0l2 penalties on every pair. `screen_per_row` caps the screened pairs
/// kept per row.
Incumbent initial_incumbent(const ProblemInstance& inst,
                            const cd::SolverConfig& config = {},
                            int screen_per_row = 10);

struct BnbConfig {
  double gap_tol = 0.05;
  std::int64_t node_limit = 1'000'000;
  double time_limit = kInf;  // seconds
  double int_tol = 1e-6;
  cd::SolverConfig solver;
  bool depth_first = false;       // FIFO breadth-first by default
  std::ostream* node_log = nullptr;  // line-delimited JSON when set
};

struct BnbResult {
  Incumbent incumbent;
  double lower_bound = -kInf;
  double gap = kInf;
  std::int64_t nodes_explored = 0;
  std::int64_t nodes_pruned = 0;
  std::int64_t incumbent_updates = 0;
  bool converged = false;  // gap <= gap_tol at exit
};

/// Branch-and-bound driver. Requires finite bigM and lambda0 > 0.
BnbResult solve_bnb(const ProblemInstance& inst, const BnbConfig& config = {});

}  // namespace gl0::bnb
