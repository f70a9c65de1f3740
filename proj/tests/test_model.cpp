#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "gl0/model.hpp"

using namespace gl0;

namespace {

ProblemInstance random_instance(int n, int p, unsigned seed, double l0 = 0.5,
                                double l2 = 0.1, double M = kInf) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
  return load_instance(X, l0, l2, M, /*standardize=*/false);
}

}  // namespace

TEST_CASE("load_instance scales and validates") {
  Eigen::MatrixXd X(4, 2);
  X << 1, 2, -1, 0, 2, 1, 0, -3;
  auto inst = load_instance(X, 1.0, 0.5, 10.0, false);
  CHECK(inst.n == 4);
  CHECK(inst.p == 2);
  CHECK(inst.xtilde.col(0).squaredNorm() ==
        doctest::Approx(X.col(0).squaredNorm() / 4.0));
  CHECK(inst.v(0) == doctest::Approx(inst.xtilde.col(0).squaredNorm()));

  Eigen::MatrixXd bad = X;
  bad.col(1).setZero();
  CHECK_THROWS(load_instance(bad, 1.0, 0.5, 10.0, false));
  bad = X;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(load_instance(bad, 1.0, 0.5, 10.0, false));
}

TEST_CASE("residual maintenance stays consistent under random edits") {
  auto inst = random_instance(25, 8, 17);
  auto est = SymmetricEstimate::diagonal(inst);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, inst.p - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int it = 0; it < 500; ++it) {
    int i = pick(rng), j = pick(rng);
    if (i == j) {
      est.set_diag(inst, i, 0.5 + std::abs(val(rng)));
    } else {
      est.set_offdiag(inst, i, j, val(rng));
    }
  }
  CHECK(est.residual_drift(inst) < 1e-10);
  CHECK(est.support().size() > 0);
  est.set_offdiag(inst, 0, 1, 0.0);
  CHECK(est.support().count(make_pair_sorted(0, 1)) == 0);

  // dense() round-trips through refresh
  Eigen::MatrixXd T = est.dense();
  CHECK((T - T.transpose()).norm() == 0.0);
  auto est2 = est;
  est2.refresh_residuals(inst);
  CHECK(est.residual_drift(inst) < 1e-10);
}

TEST_CASE("objectives agree and penalize coherently") {
  auto inst = random_instance(30, 6, 29, 0.7, 0.3, 5.0);
  auto est = SymmetricEstimate::diagonal(inst);
  est.set_offdiag(inst, 0, 1, 0.4);
  est.set_offdiag(inst, 2, 3, -0.2);

  // F0 = smooth + l0*|S| + l2*||offdiag||^2
  double smooth = objective_smooth(inst, est);
  double f0 = objective_F0(inst, est);
  double pen = 2 * inst.lambda0 +
               inst.lambda2 * (0.4 * 0.4 + 0.2 * 0.2);
  CHECK(f0 == doctest::Approx(smooth + pen));

  // matches direct dense formula
  Eigen::MatrixXd T = est.dense();
  double direct = 0.0;
  for (int i = 0; i < inst.p; ++i) {
    Eigen::VectorXd Xti = inst.xtilde * T.col(i);
    direct += -std::log(T(i, i)) + Xti.squaredNorm() / T(i, i);
  }
  CHECK(smooth == doctest::Approx(direct).epsilon(1e-10));

  // box violation
  est.set_offdiag(inst, 0, 1, 7.0);
  CHECK(std::isinf(objective_F0(inst, est)));

  est.set_offdiag(inst, 0, 1, 0.4);
  CHECK_THROWS(est.set_diag(inst, 0, -1.0));
}

TEST_CASE("node states track fixed variables") {
  NodeState root;
  CHECK(root.zbound(2, 1) == ZBound::Relaxed);
  NodeState child = root;
  child.zbounds[make_pair_sorted(0, 1)] = ZBound::FixedOne;
  child.zbounds[make_pair_sorted(0, 2)] = ZBound::FixedZero;
  CHECK(child.fixed_one().count(make_pair_sorted(1, 0)) == 1);
  CHECK(child.fixed_zero().count(make_pair_sorted(2, 0)) == 1);

  ProblemInstance inst = random_instance(10, 4, 5, 1.0, 0.5, 3.0);
  PenaltySpec pen = child.penalties(inst);
  CHECK(pen.tag(0, 1) == PairTag::FixedOne);
  CHECK(pen.tag(0, 2) == PairTag::FixedZero);
  CHECK(pen.tag(1, 3) == PairTag::Interval);
}
