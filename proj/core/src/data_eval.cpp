#include "gl0/data_eval.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "gl0/bnb.hpp"

namespace gl0::data {

namespace {

// Deterministic standard normal via Box-Muller on a seeded mt19937_64; the
// distribution classes in <random> are not portable across libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
  }
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double condition_number(const Eigen::VectorXd& eigs, double delta) {
  return (eigs.maxCoeff() + delta) / (eigs.minCoeff() + delta);
}

// Finish B -> Theta: pick delta by bisection for the condition target,
// then rescale so the inverse has unit diagonal.
Eigen::MatrixXd finalize_truth(const Eigen::MatrixXd& B, double cond_target) {
  if (!(cond_target > 1.0))
    throw std::invalid_argument(
        "generate: condition target must exceed the achievable minimum (1)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  Eigen::VectorXd eigs = es.eigenvalues();
  double lmin = eigs.minCoeff();
  double lmax = eigs.maxCoeff();
  if (lmax - lmin <= 1e-12 * std::max(1.0, std::abs(lmax)))
    throw std::invalid_argument("generate: degenerate spectrum");

  // cond(B + delta I) decreases monotonically from inf to 1 on
  // (-lmin, inf); bracket then bisect to 0.1% (tighter than the 1% spec).
  double lo = -lmin + (lmax - lmin) * 1e-12;
  while (condition_number(eigs, lo) < cond_target) lo *= 0.5;  // unreachable in practice
  double hi = std::max(1.0, -lmin * 2.0 + 1.0);
  while (condition_number(eigs, hi) > cond_target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (condition_number(eigs, mid) > cond_target)
      lo = mid;
    else
      hi = mid;
    if (std::abs(condition_number(eigs, mid) - cond_target) <
        1e-3 * cond_target)
      break;
  }
  double delta = 0.5 * (lo + hi);

  Eigen::MatrixXd theta =
      B + delta * Eigen::MatrixXd::Identity(B.rows(), B.cols());
  // Theta <- D Theta D with D_ii = sqrt((Theta^{-1})_ii) keeps symmetry and
  // support while giving the inverse a unit diagonal.
  Eigen::MatrixXd sigma = theta.inverse();
  Eigen::VectorXd d = sigma.diagonal().cwiseSqrt();
  theta = d.asDiagonal() * theta * d.asDiagonal();
  theta = ((theta + theta.transpose()) / 2.0).eval();
  return theta;
}

}  // namespace

GroundTruth generate_uniform(int p, int k, double cond_target,
                             std::uint64_t seed) {
  if (p < 2 || k <= 0 || k >= p)
    throw std::invalid_argument("generate_uniform: need p >= 2, 0 < k < p");
  double p0 = static_cast<double>(k) / (2.0 * p);
  std::mt19937_64 rng(seed);
  auto coin = [&] { return (rng() >> 11) * (1.0 / 9007199254740992.0) < p0; };
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (coin()) B(i, j) = 0.5;
  B = ((B + B.transpose()) / 2.0).eval();
  B.diagonal().setZero();
  return GroundTruth{finalize_truth(B, cond_target), "uniform", k, cond_target,
                     seed};
}

GroundTruth generate_banded(int p, int k, double cond_target,
                            std::uint64_t seed) {
  if (p < 2 || k < 2 || k % 2 != 0 || k >= p)
    throw std::invalid_argument(
        "generate_banded: need even k with 2 <= k < p");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && std::abs(i - j) <= k / 2)
        B(i, j) = std::pow(0.5, std::abs(i - j));
  return GroundTruth{finalize_truth(B, cond_target), "banded", k, cond_target,
                     seed};
}

Eigen::MatrixXd sample_gaussian(const GroundTruth& truth, int n,
                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n >= 1 required");
  const int p = static_cast<int>(truth.theta.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(truth.theta.inverse());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_gaussian: covariance factorization failed");
  Eigen::MatrixXd L = llt.matrixL();
  NormalSource normal(seed);
  Eigen::MatrixXd Z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) Z(i, j) = normal();
  return Z * L.transpose();
}

double mcc(const Eigen::MatrixXd& theta_star,
           const Eigen::MatrixXd& theta_hat) {
  const int p = static_cast<int>(theta_star.rows());
  if (theta_hat.rows() != p || theta_hat.cols() != theta_star.cols())
    throw std::invalid_argument("mcc: dimension mismatch");
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      bool truth = theta_star(i, j) != 0.0;
      bool est = theta_hat(i, j) != 0.0;
      if (truth && est)
        ++tp;
      else if (!truth && est)
        ++fp;
      else if (!truth && !est)
        ++tn;
      else
        ++fn;
    }
  }
  double denom = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / denom;
}

Metrics eval_metrics(const Eigen::MatrixXd& theta_star,
                     const Eigen::MatrixXd& theta_hat) {
  if (theta_hat.rows() != theta_star.rows() ||
      theta_hat.cols() != theta_star.cols())
    throw std::invalid_argument("eval_metrics: dimension mismatch");
  for (int i = 0; i < theta_hat.rows(); ++i)
    if (!(theta_hat(i, i) > 0.0))
      throw std::invalid_argument("eval_metrics: nonpositive diagonal");
  Metrics m;
  m.frob_rel = (theta_hat - theta_star).norm() / theta_star.norm();
  m.mcc = mcc(theta_star, theta_hat);
  m.nnz = (theta_hat.array() != 0.0).count();
  return m;
}

double validation_loss(const Eigen::MatrixXd& val_data,
                       const Eigen::MatrixXd& theta) {
  const int nval = static_cast<int>(val_data.rows());
  Eigen::MatrixXd xv = val_data / std::sqrt(static_cast<double>(nval));
  Eigen::MatrixXd R = xv * theta;
  double total = 0.0;
  for (int i = 0; i < theta.cols(); ++i) {
    if (!(theta(i, i) > 0.0))
      throw std::invalid_argument("validation_loss: nonpositive diagonal");
    total += -std::log(theta(i, i)) + R.col(i).squaredNorm() / theta(i, i);
  }
  return total;
}

TuneResult tune_grid(const Eigen::MatrixXd& train, const Eigen::MatrixXd& val,
                     const GridSpec& grid, SolveMode mode, double bigM,
                     const cd::SolverConfig& config, double gap_tol,
                     int threads) {
  if (grid.n_lambda0 < 1 || grid.n_lambda2 < 1)
    throw std::invalid_argument("tune_grid: empty grid");
  if (val.rows() < 1) throw std::invalid_argument("tune_grid: empty validation");

  const int p = static_cast<int>(train.cols());
  const int n = static_cast<int>(train.rows());
  double scale = std::sqrt(std::log(static_cast<double>(p)) / n);
  double lo = grid.lo > 0.0 ? grid.lo : scale / 100.0;
  double hi = grid.hi > 0.0 ? grid.hi : scale * 100.0;

  auto log_space = [&](int count, int idx) {
    if (count == 1) return lo;
    double t = static_cast<double>(idx) / (count - 1);
    return std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  };

  struct Cell {
    GridPoint point;
    Eigen::MatrixXd theta;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(grid.n_lambda0) *
                          grid.n_lambda2);

  auto run_cell = [&](int idx) {
    int i0 = idx / grid.n_lambda2;
    int i2 = idx % grid.n_lambda2;
    Cell& cell = cells[idx];
    cell.point.lambda0 = log_space(grid.n_lambda0, i0);
    cell.point.lambda2 = log_space(grid.n_lambda2, i2);
    try {
      ProblemInstance inst = load_instance(train, cell.point.lambda0,
                                           cell.point.lambda2, bigM, false);
      if (mode == SolveMode::Exact) {
        bnb::BnbConfig bcfg;
        bcfg.gap_tol = gap_tol;
        bcfg.solver = config;
        bnb::BnbResult res = bnb::solve_bnb(inst, bcfg);
        cell.theta = res.incumbent.solution.dense();
        cell.point.converged = res.converged;
      } else {
        Incumbent inc = bnb::initial_incumbent(inst, config);
        cell.theta = inc.solution.dense();
        cell.point.converged = true;
      }
      cell.point.val_loss = validation_loss(val, cell.theta);
      cell.point.nnz = (cell.theta.array() != 0.0).count();
    } catch (const std::exception&) {
      cell.point.converged = false;
    }
  };

  const int total = static_cast<int>(cells.size());
  if (threads <= 1) {
    for (int idx = 0; idx < total; ++idx) run_cell(idx);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int idx = next.fetch_add(1); idx < total;
             idx = next.fetch_add(1))
          run_cell(idx);
      });
    }
    for (auto& th : pool) th.join();
  }

  TuneResult result;
  int best = -1;
  for (int idx = 0; idx < total; ++idx) {
    const GridPoint& gp = cells[idx].point;
    result.table.push_back(gp);
    if (!gp.converged) continue;
    bool better = best < 0 || gp.val_loss < cells[best].point.val_loss -
                                                1e-12 ||
                  (std::abs(gp.val_loss - cells[best].point.val_loss) <=
                       1e-12 &&
                   gp.nnz < cells[best].point.nnz);
    if (better) best = idx;
  }
  if (best < 0) throw std::runtime_error("tune_grid: no grid point converged");
  result.lambda0 = cells[best].point.lambda0;
  result.lambda2 = cells[best].point.lambda2;
  result.theta = cells[best].theta;
  result.val_loss = cells[best].point.val_loss;
  return result;
}

}  // namespace gl0::data
