#include "gl0/regularizers.hpp"

#include <cmath>
#include <stdexcept>

namespace gl0::reg {

namespace {

double sign(double x) { return x < 0 ? -1.0 : 1.0; }

// Regime boundary sqrt(lambda0/lambda2) with lambda2 = 0 treated as the
// limit: +inf when lambda0 > 0 (big-M regime), 0 when lambda0 = 0.
double regime_ratio(double lambda0, double lambda2) {
  if (lambda2 > 0.0) return std::sqrt(lambda0 / lambda2);
  return lambda0 > 0.0 ? kInf : 0.0;
}

}  // namespace

double boxed_soft_threshold(double x, double lambda, double M) {
  double a = std::abs(x);
  if (a <= lambda) return 0.0;
  if (a <= lambda + M) return (a - lambda) * sign(x);
  return M * sign(x);
}

double zero_threshold(double lambda0, double lambda2, double M) {
  if (regime_ratio(lambda0, lambda2) <= M)
    return 2.0 * std::sqrt(lambda0 * lambda2);
  return lambda0 / M + lambda2 * M;
}

double psi_value(double theta, double lambda0, double lambda2, double M) {
  double a = std::abs(theta);
  if (a > M) return kInf;
  double ratio = regime_ratio(lambda0, lambda2);
  if (ratio <= M) {
    if (a <= ratio) return 2.0 * std::sqrt(lambda0 * lambda2) * a;
    return lambda0 + lambda2 * theta * theta;
  }
  return (lambda0 / M + lambda2 * M) * a;
}

double prox_psi(double t, double lambda0, double lambda2, double M) {
  double ratio = regime_ratio(lambda0, lambda2);
  if (ratio > M) return boxed_soft_threshold(t, lambda0 / M + lambda2 * M, M);
  double cut = 2.0 * std::sqrt(lambda0 * lambda2) + ratio;
  if (std::abs(t) <= cut)
    return boxed_soft_threshold(t, 2.0 * std::sqrt(lambda0 * lambda2), M);
  return boxed_soft_threshold(t / (1.0 + 2.0 * lambda2), 0.0, M);
}

double phi_value(double theta, int z, double lambda0, double lambda2,
                 double M) {
  if (z == 0) return theta == 0.0 ? 0.0 : kInf;
  if (std::abs(theta) > M) return kInf;
  return lambda0 + lambda2 * theta * theta;
}

double prox_phi(double t, int z, double lambda2, double M) {
  if (z == 0) return 0.0;
  return boxed_soft_threshold(t / (1.0 + 2.0 * lambda2), 0.0, M);
}

double l0l2_value(double theta, double lambda0, double lambda2, double M) {
  if (theta == 0.0) return 0.0;
  if (std::abs(theta) > M) return kInf;
  return lambda0 + lambda2 * theta * theta;
}

ProxSet prox_l0l2(double t, double lambda0, double lambda2, double M) {
  // Compare q(0) = t^2/2 against the best nonzero candidate
  //   theta' = min(|t|/(1+2 lambda2), M) sign(t).
  // Ties return both minimizers, zero first.
  ProxSet out;
  double a = std::abs(t);
  double denom = 1.0 + 2.0 * lambda2;
  bool clipped = a / denom > M;  // false when M = inf
  double cand = clipped ? M * sign(t) : t / denom;
  double breakeven =
      clipped ? (0.5 + lambda2) * M + lambda0 / M
              : std::sqrt(2.0 * lambda0 * denom);
  if (a < breakeven) {
    out.values[0] = 0.0;
    out.count = 1;
  } else if (a == breakeven) {
    out.values[0] = 0.0;
    out.values[1] = cand;
    out.count = 2;
  } else {
    out.values[0] = cand;
    out.count = 1;
  }
  return out;
}

double conj_psi(double alpha, double lambda0, double lambda2, double M) {
  double a = std::abs(alpha);
  if (std::isinf(M)) {
    if (lambda2 <= 0.0)
      throw std::domain_error("conj_psi: unbounded (lambda2 = 0, M = inf)");
    double cut = 2.0 * std::sqrt(lambda0 * lambda2);
    return a <= cut ? 0.0 : a * a / (4.0 * lambda2) - lambda0;
  }
  double ratio = regime_ratio(lambda0, lambda2);
  if (ratio <= M && lambda2 > 0.0) {
    if (a <= 2.0 * std::sqrt(lambda0 * lambda2)) return 0.0;
    if (a <= 2.0 * lambda2 * M) return a * a / (4.0 * lambda2) - lambda0;
    return M * a - (lambda0 + lambda2 * M * M);
  }
  // big-M regime (covers lambda2 = 0; lambda0 = lambda2 = 0 gives M|alpha|)
  double c = lambda0 / M + lambda2 * M;
  if (a <= c) return 0.0;
  return M * a - (lambda0 + lambda2 * M * M);
}

double conj_phi(double alpha, int z, double lambda0, double lambda2,
                double M) {
  if (z == 0) return 0.0;
  double a = std::abs(alpha);
  if (lambda2 > 0.0) {
    if (std::isinf(M) || a <= 2.0 * lambda2 * M)
      return a * a / (4.0 * lambda2) - lambda0;
    return M * a - (lambda0 + lambda2 * M * M);
  }
  if (std::isinf(M))
    throw std::domain_error("conj_phi: unbounded (z = 1, lambda2 = 0, M = inf)");
  return M * a - lambda0;
}

double penalty_value(double theta, PairTag tag, double lambda0, double lambda2,
                     double M) {
  switch (tag) {
    case PairTag::Interval:
      return psi_value(theta, lambda0, lambda2, M);
    case PairTag::FixedZero:
    case PairTag::Forbidden:
      return theta == 0.0 ? 0.0 : kInf;
    case PairTag::FixedOne:
      return phi_value(theta, 1, lambda0, lambda2, M);
    case PairTag::L0L2Box:
      return l0l2_value(theta, lambda0, lambda2, M);
  }
  return kInf;
}

double penalty_conjugate(double alpha, PairTag tag, double lambda0,
                         double lambda2, double M) {
  switch (tag) {
    case PairTag::Interval:
      return conj_psi(alpha, lambda0, lambda2, M);
    case PairTag::FixedZero:
    case PairTag::Forbidden:
      return 0.0;
    case PairTag::FixedOne:
      return conj_phi(alpha, 1, lambda0, lambda2, M);
    case PairTag::L0L2Box:
      throw std::domain_error("penalty_conjugate: l0l2 is nonconvex");
  }
  return 0.0;
}

ProxSet quad_oracle_set(double a, double b, PairTag tag, double lambda0,
                        double lambda2, double M) {
  if (!(a > 0.0)) throw std::invalid_argument("quad_oracle: a must be > 0");
  double t = -b / (2.0 * a);
  double l0 = lambda0 / (2.0 * a);
  double l2 = lambda2 / (2.0 * a);
  ProxSet out;
  switch (tag) {
    case PairTag::Interval:
      out.values[0] = prox_psi(t, l0, l2, M);
      break;
    case PairTag::FixedZero:
    case PairTag::Forbidden:
      out.values[0] = 0.0;
      break;
    case PairTag::FixedOne:
      out.values[0] = prox_phi(t, 1, l2, M);
      break;
    case PairTag::L0L2Box:
      return prox_l0l2(t, l0, l2, M);
  }
  return out;
}

double quad_oracle(double a, double b, PairTag tag, double lambda0,
                   double lambda2, double M) {
  return quad_oracle_set(a, b, tag, lambda0, lambda2, M).preferred();
}

}  // namespace gl0::reg
