#include "gl0/model.hpp"

#include <cmath>
#include <string>

#include "gl0/regularizers.hpp"

namespace gl0 {

ProblemInstance load_instance(const Eigen::MatrixXd& data, double lambda0,
                              double lambda2, double bigM, bool standardize) {
  const int n = static_cast<int>(data.rows());
  const int p = static_cast<int>(data.cols());
  if (n < 2 || p < 2)
    throw std::invalid_argument("load_instance: need n >= 2 and p >= 2");
  if (!data.allFinite())
    throw std::invalid_argument("load_instance: non-finite entries in data");
  if (lambda0 < 0.0 || lambda2 < 0.0)
    throw std::invalid_argument("load_instance: negative penalty parameter");
  if (!(bigM > 0.0))
    throw std::invalid_argument("load_instance: bigM must be positive");

  ProblemInstance inst;
  inst.n = n;
  inst.p = p;
  inst.lambda0 = lambda0;
  inst.lambda2 = lambda2;
  inst.bigM = bigM;
  inst.standardized = standardize;
  inst.xtilde = data;
  if (standardize)
    inst.xtilde.rowwise() -= inst.xtilde.colwise().mean();
  inst.xtilde /= std::sqrt(static_cast<double>(n));
  inst.v = inst.xtilde.colwise().squaredNorm();
  for (int j = 0; j < p; ++j) {
    if (inst.v(j) <= 0.0)
      throw std::invalid_argument("load_instance: zero column " +
                                  std::to_string(j));
  }
  return inst;
}

SymmetricEstimate::SymmetricEstimate(const ProblemInstance& inst,
                                     const Eigen::VectorXd& diag)
    : p_(inst.p), packed_(pack_count(inst.p), 0.0) {
  if (diag.size() != p_)
    throw std::invalid_argument("SymmetricEstimate: diagonal size mismatch");
  for (int i = 0; i < p_; ++i) {
    if (!(diag(i) > 0.0))
      throw std::invalid_argument("SymmetricEstimate: nonpositive diagonal");
    packed_[pack_index(i, i)] = diag(i);
  }
  resid_ = inst.xtilde * Eigen::MatrixXd(diag.asDiagonal());
}

SymmetricEstimate SymmetricEstimate::diagonal(const ProblemInstance& inst) {
  return SymmetricEstimate(inst, inst.v.cwiseInverse());
}

void SymmetricEstimate::set_offdiag(const ProblemInstance& inst, int i, int j,
                                    double value) {
  if (i == j) throw std::invalid_argument("set_offdiag: i == j");
  auto [a, b] = make_pair_sorted(i, j);
  double& slot = packed_[pack_index(a, b)];
  double delta = value - slot;
  if (delta != 0.0) {
    resid_.col(a) += delta * inst.xtilde.col(b);
    resid_.col(b) += delta * inst.xtilde.col(a);
    slot = value;
  }
  if (value == 0.0)
    support_.erase({a, b});
  else
    support_.insert({a, b});
}

void SymmetricEstimate::set_diag(const ProblemInstance& inst, int i,
                                 double value) {
  if (!(value > 0.0))
    throw std::invalid_argument("set_diag: nonpositive value");
  double& slot = packed_[pack_index(i, i)];
  double delta = value - slot;
  if (delta != 0.0) {
    resid_.col(i) += delta * inst.xtilde.col(i);
    slot = value;
  }
}

void SymmetricEstimate::refresh_residuals(const ProblemInstance& inst) {
  resid_ = inst.xtilde * dense();
}

double SymmetricEstimate::residual_drift(const ProblemInstance& inst) const {
  Eigen::MatrixXd fresh = inst.xtilde * dense();
  double scale = std::max(fresh.norm(), 1.0);
  return (resid_ - fresh).norm() / scale;
}

Eigen::MatrixXd SymmetricEstimate::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p_, p_);
  for (int i = 0; i < p_; ++i) out(i, i) = diag(i);
  for (const auto& [i, j] : support_) {
    double val = (*this)(i, j);
    out(i, j) = val;
    out(j, i) = val;
  }
  return out;
}

SymmetricEstimate SymmetricEstimate::restricted_to(
    const ProblemInstance& inst, const PairSet& keep) const {
  Eigen::VectorXd d(p_);
  for (int i = 0; i < p_; ++i) d(i) = diag(i);
  SymmetricEstimate out(inst, d);
  for (const auto& pr : support_) {
    if (keep.count(pr)) out.set_offdiag(inst, pr.first, pr.second,
                                        (*this)(pr.first, pr.second));
  }
  return out;
}

PairSet NodeState::fixed_one() const {
  PairSet out;
  for (const auto& [pr, zb] : zbounds)
    if (zb == ZBound::FixedOne) out.insert(pr);
  return out;
}

PairSet NodeState::fixed_zero() const {
  PairSet out;
  for (const auto& [pr, zb] : zbounds)
    if (zb == ZBound::FixedZero) out.insert(pr);
  return out;
}

PenaltySpec NodeState::penalties(const ProblemInstance& inst) const {
  PenaltySpec spec = PenaltySpec::from_instance(inst, PairTag::Interval);
  for (const auto& [pr, zb] : zbounds) {
    if (zb == ZBound::FixedZero)
      spec.overrides[pr] = PairTag::FixedZero;
    else if (zb == ZBound::FixedOne)
      spec.overrides[pr] = PairTag::FixedOne;
  }
  return spec;
}

double objective_smooth(const ProblemInstance& inst,
                        const SymmetricEstimate& est) {
  double total = 0.0;
  for (int i = 0; i < inst.p; ++i) {
    double d = est.diag(i);
    if (!(d > 0.0))
      throw std::domain_error("objective: nonpositive diagonal");
    total += -std::log(d) + est.residuals().col(i).squaredNorm() / d;
  }
  return total;
}

double objective_F0(const ProblemInstance& inst,
                    const SymmetricEstimate& est) {
  double total = objective_smooth(inst, est);
  for (const auto& [i, j] : est.support()) {
    double val = est(i, j);
    if (std::abs(val) > inst.bigM) return kInf;
    total += inst.lambda0 + inst.lambda2 * val * val;
  }
  return total;
}

double objective_unified(const ProblemInstance& inst,
                         const SymmetricEstimate& est,
                         const PenaltySpec& penalties) {
  double total = objective_smooth(inst, est);
  // Penalties vanish at zero except FixedOne, which contributes lambda0
  // even at theta = 0; fold those in from the overrides map.
  for (const auto& [i, j] : est.support()) {
    double h = reg::penalty_value(est(i, j), penalties.tag(i, j),
                                  penalties.lambda0, penalties.lambda2,
                                  penalties.bigM);
    if (std::isinf(h)) return kInf;
    total += h;
  }
  for (const auto& [pr, tag] : penalties.overrides) {
    if (tag == PairTag::FixedOne && !est.support().count(pr))
      total += penalties.lambda0;
  }
  if (penalties.default_tag == PairTag::FixedOne) {
    long npairs = static_cast<long>(inst.p) * (inst.p - 1) / 2;
    long covered = static_cast<long>(penalties.overrides.size());
    long on_support = 0;
    for (const auto& pr : est.support())
      if (!penalties.overrides.count(pr)) ++on_support;
    total += penalties.lambda0 * static_cast<double>(npairs - covered -
                                                     on_support);
  }
  return total;
}

}  // namespace gl0
