#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gl0 {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Unordered pair of variable indices, stored with first < second.
using Pair = std::pair<int, int>;
using PairSet = std::set<Pair>;

inline Pair make_pair_sorted(int i, int j) {
  return i < j ? Pair{i, j} : Pair{j, i};
}

/// Immutable problem data: scaled design matrix, cached column norms and
/// penalty parameters. Safe to share across threads once constructed.
struct ProblemInstance {
  int n = 0;
  int p = 0;
  Eigen::MatrixXd xtilde;  // n x p, columns already scaled by 1/sqrt(n)
  Eigen::VectorXd v;       // v(i) = xtilde.col(i).squaredNorm()
  double lambda0 = 0.0;
  double lambda2 = 0.0;
  double bigM = kInf;  // finite required for exact BnB
  bool standardized = false;
};

/// Build an instance from raw data. Columns are scaled by 1/sqrt(n); if
/// `standardize` is set they are mean-centered first. Rejects non-finite
/// entries and columns that are (or become) identically zero.
ProblemInstance load_instance(const Eigen::MatrixXd& data, double lambda0,
                              double lambda2, double bigM,
                              bool standardize = false);

/// Dense symmetric precision estimate with packed lower-triangle storage,
/// a sparse off-diagonal support index, and cached residuals r_i = Xtilde
/// * theta_i. Single-writer; distinct estimates may live on distinct
/// threads.
class SymmetricEstimate {
 public:
  SymmetricEstimate(const ProblemInstance& inst, const Eigen::VectorXd& diag);

  /// Diagonal estimate theta = diag(1/v_1, ..., 1/v_p), the optimum when
  /// all off-diagonals are forced to zero.
  static SymmetricEstimate diagonal(const ProblemInstance& inst);

  int p() const { return p_; }
  double operator()(int i, int j) const {
    return packed_[pack_index(i, j)];
  }
  double diag(int i) const { return packed_[pack_index(i, i)]; }

  /// Set theta_ij = theta_ji (i != j) and update residual columns i and j
  /// in O(n).
  void set_offdiag(const ProblemInstance& inst, int i, int j, double value);
  /// Set theta_ii (> 0 required) and update residual column i in O(n).
  void set_diag(const ProblemInstance& inst, int i, double value);

  const Eigen::MatrixXd& residuals() const { return resid_; }
  const PairSet& support() const { return support_; }

  /// Recompute all residuals from scratch.
  void refresh_residuals(const ProblemInstance& inst);
  /// Max relative deviation between cached and recomputed residuals.
  double residual_drift(const ProblemInstance& inst) const;

  Eigen::MatrixXd dense() const;

  /// Copy with all off-diagonals outside `keep` zeroed (residuals rebuilt).
  SymmetricEstimate restricted_to(const ProblemInstance& inst,
                                  const PairSet& keep) const;

 private:
  static std::size_t pack_count(int p) {
    return static_cast<std::size_t>(p) * (p + 1) / 2;
  }
  std::size_t pack_index(int i, int j) const {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int p_;
  std::vector<double> packed_;  // lower triangle, row-major
  PairSet support_;             // off-diagonal nonzeros, i < j
  Eigen::MatrixXd resid_;       // n x p
};

/// Branching state of one binary indicator.
enum class ZBound { Relaxed, FixedZero, FixedOne };

/// Penalty shape applied to one off-diagonal pair.
enum class PairTag {
  Interval,   // psi: interval relaxation z in [0,1]
  FixedZero,  // phi with z = 0: theta forced to 0
  FixedOne,   // phi with z = 1: lambda0 + lambda2 theta^2 + box
  L0L2Box,    // lambda0 1{theta != 0} + lambda2 theta^2 + box
  Forbidden,  // chi{theta = 0}
};

/// Per-pair penalty dispatch with shared parameters. A default tag covers
/// all pairs except sparse overrides.
struct PenaltySpec {
  double lambda0 = 0.0;
  double lambda2 = 0.0;
  double bigM = kInf;
  PairTag default_tag = PairTag::Interval;
  std::map<Pair, PairTag> overrides;

  PairTag tag(int i, int j) const {
    auto it = overrides.find(make_pair_sorted(i, j));
    return it == overrides.end() ? default_tag : it->second;
  }
  static PenaltySpec from_instance(const ProblemInstance& inst,
                                   PairTag default_tag) {
    return PenaltySpec{inst.lambda0, inst.lambda2, inst.bigM, default_tag, {}};
  }
};

/// One BnB node: sparse z-bound overrides, inherited warm-start support
/// and the best valid dual bound seen so far.
struct NodeState {
  std::map<Pair, ZBound> zbounds;  // default Relaxed
  PairSet warm_support;            // must contain all FixedOne pairs
  double lower_bound = -kInf;
  int depth = 0;
  int id = 0;
  int parent = -1;
  std::optional<SymmetricEstimate> relaxation_solution;

  ZBound zbound(int i, int j) const {
    auto it = zbounds.find(make_pair_sorted(i, j));
    return it == zbounds.end() ? ZBound::Relaxed : it->second;
  }
  PairSet fixed_one() const;
  PairSet fixed_zero() const;
  /// Node relaxation penalties: Interval by default, phi on fixed pairs.
  PenaltySpec penalties(const ProblemInstance& inst) const;
};

/// Best integral-feasible solution found so far.
struct Incumbent {
  SymmetricEstimate solution;
  double objective;
};

/// Smooth pseudo-likelihood part: sum_i (-log theta_ii + ||r_i||^2 /
/// theta_ii). Throws on nonpositive diagonal.
double objective_smooth(const ProblemInstance& inst,
                        const SymmetricEstimate& est);

/// The l0l2-penalized objective F_0. Returns +inf when some |theta_ij|
/// exceeds bigM.
double objective_F0(const ProblemInstance& inst, const SymmetricEstimate& est);

/// Unified objective: smooth part plus per-pair penalties dispatched by
/// `penalties`. Returns +inf on any characteristic-function violation.
double objective_unified(const ProblemInstance& inst,
                         const SymmetricEstimate& est,
                         const PenaltySpec& penalties);

}  // namespace gl0
