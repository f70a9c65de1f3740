#pragma once

#include <array>

#include "gl0/model.hpp"

namespace gl0::reg {

/// Prox of lambda|x| + chi{|x| <= M}: shrink by lambda, clip at M.
double boxed_soft_threshold(double x, double lambda, double M);

/// Threshold c(lambda0, lambda2, M): prox_psi(t) = 0 iff |t| <= c, and
/// conj_psi(a) = 0 iff |a| <= c.
double zero_threshold(double lambda0, double lambda2, double M);

/// Interval-relaxation penalty psi (reverse-Huber-with-box). +inf beyond
/// the box.
double psi_value(double theta, double lambda0, double lambda2, double M);

/// argmin_theta 0.5 (theta - t)^2 + psi(theta).
double prox_psi(double t, double lambda0, double lambda2, double M);

/// Fixed-z penalty phi. z = 0: chi{theta = 0}; z = 1: lambda0 + lambda2
/// theta^2 + box.
double phi_value(double theta, int z, double lambda0, double lambda2,
                 double M);

/// argmin_theta 0.5 (theta - t)^2 + phi(theta; z).
double prox_phi(double t, int z, double lambda2, double M);

double l0l2_value(double theta, double lambda0, double lambda2, double M);

/// Full argmin set of 0.5 (theta - t)^2 + lambda0 1{theta != 0} + lambda2
/// theta^2 + chi{|theta| <= M}. At tie boundaries both minimizers are
/// returned (count == 2, zero first).
struct ProxSet {
  std::array<double, 2> values{0.0, 0.0};
  int count = 1;
  /// Sparsity-preferring selection: 0 whenever 0 is a minimizer.
  double preferred() const { return values[0]; }
};
ProxSet prox_l0l2(double t, double lambda0, double lambda2, double M);

/// Convex conjugate psi*(alpha).
double conj_psi(double alpha, double lambda0, double lambda2, double M);

/// Convex conjugate phi*(alpha; z). Throws when z = 1, lambda2 = 0 and
/// M = inf (sup diverges).
double conj_phi(double alpha, int z, double lambda0, double lambda2, double M);

/// Penalty value h(theta) for one pair, dispatched by tag.
double penalty_value(double theta, PairTag tag, double lambda0, double lambda2,
                     double M);

/// Conjugate h*(alpha) for one pair, dispatched by tag.
double penalty_conjugate(double alpha, PairTag tag, double lambda0,
                         double lambda2, double M);

/// argmin_theta a theta^2 + b theta + h(theta), a > 0, via the matching
/// prox with parameters rescaled by 1/(2a). L0L2Box ties resolve to 0.
double quad_oracle(double a, double b, PairTag tag, double lambda0,
                   double lambda2, double M);

/// Full argmin set of the quadratic oracle (size 2 only for L0L2Box ties).
ProxSet quad_oracle_set(double a, double b, PairTag tag, double lambda0,
                        double lambda2, double M);

}  // namespace gl0::reg
