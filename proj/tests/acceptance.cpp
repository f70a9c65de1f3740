// Acceptance gate: one pass/fail line per shipping criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gl0/bnb.hpp"
#include "gl0/data_eval.hpp"
#include "gl0/duality.hpp"
#include "gl0/io.hpp"
#include "gl0/regularizers.hpp"
#include "oracles.hpp"

using namespace gl0;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ProblemInstance random_instance(int n, int p, unsigned seed, double l0,
                                double l2, double M) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
  return load_instance(X, l0, l2, M, false);
}

PairSet all_pairs(int p) {
  PairSet out;
  for (int j = 0; j < p; ++j)
    for (int i = j + 1; i < p; ++i) out.insert(make_pair_sorted(i, j));
  return out;
}

// ---------------------------------------------------------------- 1 ----
bool criterion_prox_conjugates(std::string& detail) {
  auto t0 = Clock::now();
  std::mt19937 rng(1101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_prox = 0.0, worst_conj = 0.0;

  for (int it = 0; it < 1000; ++it) {
    double l0 = 0.01 + 4.0 * unit(rng);
    double l2 = unit(rng) < 0.15 ? 0.0 : 0.01 + 4.0 * unit(rng);
    double M = unit(rng) < 0.1 ? kInf : 0.1 + 5.0 * unit(rng);
    double span = std::isinf(M) ? 10.0 : M;
    double t = (2.0 * unit(rng) - 1.0) * (span + 2.0 * l0 + 3.0);

    for (PairTag tag :
         {PairTag::Interval, PairTag::FixedOne, PairTag::L0L2Box}) {
      if (std::isinf(M) && tag == PairTag::Interval && l2 == 0.0) continue;
      double got = tag == PairTag::Interval ? reg::prox_psi(t, l0, l2, M)
                   : tag == PairTag::FixedOne
                       ? reg::prox_phi(t, 1, l2, M)
                       : reg::prox_l0l2(t, l0, l2, M).preferred();
      auto f = [&](double x) {
        return 0.5 * (x - t) * (x - t) +
               reg::penalty_value(x, tag, l0, l2, M);
      };
      double lo = std::isinf(M) ? -std::abs(t) - 1 : -M;
      double hi = std::isinf(M) ? std::abs(t) + 1 : M;
      worst_prox =
          std::max(worst_prox, f(got) - oracles::brute_min_value_1d(f, lo, hi));
    }

    if (!std::isinf(M)) {
      double alpha = (2.0 * unit(rng) - 1.0) * 12.0;
      auto psi_fn = [&](double x) { return reg::psi_value(x, l0, l2, M); };
      worst_conj = std::max(
          worst_conj, std::abs(reg::conj_psi(alpha, l0, l2, M) -
                               oracles::sup_grid_conjugate(psi_fn, alpha, M)));
      auto phi_fn = [&](double x) {
        return reg::phi_value(x, 1, l0, l2, M);
      };
      worst_conj = std::max(
          worst_conj,
          std::abs(reg::conj_phi(alpha, 1, l0, l2, M) -
                   oracles::sup_grid_conjugate(phi_fn, alpha, M)));
    }
  }
  double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "prox err " << worst_prox << ", conj err " << worst_conj << ", "
     << elapsed << "s";
  detail = os.str();
  return worst_prox <= 1e-8 && worst_conj <= 1e-6 && elapsed < 120.0;
}

// ---------------------------------------------------------------- 2 ----
bool criterion_cd(std::string& detail) {
  std::mt19937 meta(2201);
  double worst_increase = -kInf;
  for (int it = 0; it < 100; ++it) {
    int p = 3 + static_cast<int>(meta() % 18);
    int n = p + 5 + static_cast<int>(meta() % 20);
    auto inst = random_instance(n, p, static_cast<unsigned>(4000 + it),
                                0.05 + 0.5 * (meta() % 100) / 100.0,
                                0.05 + 0.5 * (meta() % 100) / 100.0,
                                0.5 + 3.0 * (meta() % 100) / 100.0);
    PenaltySpec pen = NodeState{}.penalties(inst);
    auto est = SymmetricEstimate::diagonal(inst);
    PairSet all = all_pairs(p);
    double prev = objective_unified(inst, est, pen);
    for (int sweep = 0; sweep < 25; ++sweep) {
      double cur = cd::cd_sweep(inst, est, pen, all);
      worst_increase = std::max(worst_increase, cur - prev);
      prev = cur;
    }
  }
  if (worst_increase > 1e-12) {
    detail = "objective increased by " + std::to_string(worst_increase);
    return false;
  }

  double worst_stat = 0.0, worst_match = 0.0;
  for (int it = 0; it < 10; ++it) {
    auto inst = random_instance(50, 10, static_cast<unsigned>(4200 + it),
                                0.35, 0.15, 2.5);
    PenaltySpec pen = NodeState{}.penalties(inst);
    cd::SolverConfig cfg;
    cfg.rel_obj_tol = 1e-13;
    cfg.max_sweeps = 20000;
    auto res = cd::active_set_solve(inst, pen,
                                    SymmetricEstimate::diagonal(inst), {}, cfg);
    if (!res.converged) {
      detail = "active-set solve failed to converge";
      return false;
    }
    double base = objective_unified(inst, res.estimate, pen);
    for (int j = 0; j < inst.p; ++j)
      for (int i = j + 1; i < inst.p; ++i)
        for (double d : {1e-4, -1e-4}) {
          auto est = res.estimate;
          double trial = res.estimate(i, j) + d;
          if (std::abs(trial) > inst.bigM) continue;
          est.set_offdiag(inst, i, j, trial);
          worst_stat = std::max(
              worst_stat, base - objective_unified(inst, est, pen));
        }
    auto full = cd::solve_restricted(
        inst, pen, SymmetricEstimate::diagonal(inst), all_pairs(inst.p), cfg);
    worst_match = std::max(worst_match,
                           std::abs(res.objective - full.objective));
  }
  std::ostringstream os;
  os << "monotone, stationarity slack " << worst_stat
     << ", active-vs-full " << worst_match;
  detail = os.str();
  return worst_stat <= 1e-8 && worst_match <= 1e-6;
}

// ---------------------------------------------------------------- 3 ----
bool criterion_duality(std::string& detail) {
  std::mt19937 rng(3301);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  // weak duality at arbitrary points
  for (int it = 0; it < 50; ++it) {
    auto inst = random_instance(25, 6, static_cast<unsigned>(5000 + it),
                                0.3, 0.2, 2.0);
    PenaltySpec pen = NodeState{}.penalties(inst);
    auto est = SymmetricEstimate::diagonal(inst);
    for (int j = 0; j < inst.p; ++j)
      for (int i = j + 1; i < inst.p; ++i)
        if (rng() % 3 == 0) est.set_offdiag(inst, i, j, u(rng));
    double primal = objective_unified(inst, est, pen);
    auto dp = dual::build_dual(inst, est);
    if (dual::evaluate_dual_full(inst, dp, pen) > primal + 1e-10) {
      detail = "weak duality violated";
      return false;
    }
  }
  // root gaps
  double worst_gap = 0.0;
  std::mt19937 meta(3302);
  for (int it = 0; it < 12; ++it) {
    int p = 3 + static_cast<int>(meta() % 8);
    int n = 30 + static_cast<int>(meta() % 71);
    auto inst = random_instance(n, p, static_cast<unsigned>(5100 + it),
                                0.1 + 0.6 * (meta() % 100) / 100.0,
                                0.1 + 0.6 * (meta() % 100) / 100.0,
                                1.0 + 2.0 * (meta() % 100) / 100.0);
    cd::SolverConfig cfg;
    cfg.rel_obj_tol = 1e-14;
    cfg.max_sweeps = 20000;
    auto bound = dual::certified_node_bound(inst, NodeState{}, cfg);
    if (!bound.primal.converged) {
      detail = "root relaxation did not converge";
      return false;
    }
    worst_gap = std::max(
        worst_gap, (bound.primal.objective - bound.lower_bound) /
                       std::max(1.0, std::abs(bound.primal.objective)));
  }
  // sparse vs full on 100 converged nodes
  double worst_diff = 0.0;
  for (int it = 0; it < 100; ++it) {
    int p = 4 + static_cast<int>(rng() % 5);
    auto inst = random_instance(30, p, static_cast<unsigned>(5200 + it),
                                0.15 + 0.4 * (rng() % 100) / 100.0,
                                0.1 + 0.4 * (rng() % 100) / 100.0,
                                1.0 + 2.0 * (rng() % 100) / 100.0);
    NodeState node;
    std::uniform_int_distribution<int> pick(0, p - 1);
    for (int t = 0; t < p / 2; ++t) {
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      Pair pq = make_pair_sorted(i, j);
      node.zbounds[pq] = (rng() % 2) ? ZBound::FixedOne : ZBound::FixedZero;
      if (node.zbounds[pq] == ZBound::FixedOne) node.warm_support.insert(pq);
    }
    PenaltySpec pen = node.penalties(inst);
    cd::SolverConfig cfg;
    cfg.rel_obj_tol = 1e-13;
    cfg.max_sweeps = 20000;
    auto res = cd::active_set_solve(inst, pen,
                                    SymmetricEstimate::diagonal(inst),
                                    node.warm_support, cfg);
    if (!res.converged) continue;
    auto dp = dual::build_dual(inst, res.estimate);
    double full = dual::evaluate_dual_full(inst, dp, pen);
    double sparse =
        dual::evaluate_dual_sparse(inst, dp, pen, res.estimate.support());
    if (std::isfinite(full))
      worst_diff = std::max(worst_diff, std::abs(full - sparse) /
                                            std::max(1.0, std::abs(full)));
  }
  std::ostringstream os;
  os << "worst root gap " << worst_gap << ", sparse-vs-full " << worst_diff;
  detail = os.str();
  return worst_gap <= 1e-4 && worst_diff <= 1e-10;
}

// ---------------------------------------------------------------- 4 ----
bool criterion_bnb(std::string& detail) {
  auto t0 = Clock::now();
  std::mt19937 meta(4401);
  double worst_err = 0.0, worst_gap = 0.0;
  for (int it = 0; it < 20; ++it) {
    int p = 4 + static_cast<int>(meta() % 2);
    double l0 = 0.05 + 0.5 * (meta() % 100) / 100.0;
    double l2 = (meta() % 4 == 0) ? 0.0 : 0.05 + 0.5 * (meta() % 100) / 100.0;
    double M = 0.8 + 2.0 * (meta() % 100) / 100.0;
    auto inst = random_instance(30, p, static_cast<unsigned>(6000 + it),
                                l0, l2, M);

    // exhaustive enumeration over all symmetric supports
    PairSet pair_set = all_pairs(p);
    std::vector<Pair> pairs(pair_set.begin(), pair_set.end());
    cd::SolverConfig cfg;
    cfg.rel_obj_tol = 1e-13;
    cfg.max_sweeps = 50000;
    double truth = kInf;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size());
         ++mask) {
      PenaltySpec pen = PenaltySpec::from_instance(inst, PairTag::Forbidden);
      PairSet support;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask & (std::size_t{1} << b)) {
          pen.overrides[pairs[b]] = PairTag::FixedOne;
          support.insert(pairs[b]);
        }
      auto res = cd::solve_restricted(
          inst, pen, SymmetricEstimate::diagonal(inst), support, cfg);
      truth = std::min(truth, objective_F0(inst, res.estimate));
    }

    bnb::BnbConfig bcfg;
    bcfg.gap_tol = 1e-6;
    bcfg.solver.rel_obj_tol = 1e-13;
    bcfg.solver.max_sweeps = 50000;
    auto res = bnb::solve_bnb(inst, bcfg);
    if (!res.converged) {
      detail = "solver hit a limit before certifying";
      return false;
    }
    worst_err = std::max(worst_err, std::abs(res.incumbent.objective - truth));
    worst_gap = std::max(worst_gap, res.gap);
  }
  double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "max |bnb - enum| " << worst_err << ", max certified gap "
     << worst_gap << ", " << elapsed << "s";
  detail = os.str();
  return worst_err <= 1e-6 && worst_gap <= 1e-6 && elapsed < 300.0;
}

// ---------------------------------------------------------------- 5 ----
bool criterion_statistical(std::string& detail) {
  const int p = 50, k = 4;
  const double cond = 10.0;
  const std::vector<int> ns = {100, 400, 1600};
  const int n_seeds = 10;
  int threads = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));

  std::vector<double> med_mcc, med_frob;
  for (int n : ns) {
    std::vector<double> mccs, frobs;
    for (int s = 0; s < n_seeds; ++s) {
      auto truth = data::generate_banded(p, k, cond,
                                         static_cast<std::uint64_t>(s + 1));
      auto train =
          data::sample_gaussian(truth, n, static_cast<std::uint64_t>(100 + s));
      auto val = data::sample_gaussian(truth, std::max(n / 2, 50),
                                       static_cast<std::uint64_t>(200 + s));
      double bigM = 2.0 * truth.theta.cwiseAbs().maxCoeff();
      data::GridSpec grid;  // 4x4
      auto res = data::tune_grid(train, val, grid, data::SolveMode::Heuristic,
                                 bigM, {}, 0.05, threads);
      auto m = data::eval_metrics(truth.theta, res.theta);
      mccs.push_back(m.mcc);
      frobs.push_back(m.frob_rel);
    }
    auto median = [](std::vector<double> xs) {
      std::sort(xs.begin(), xs.end());
      std::size_t h = xs.size() / 2;
      return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
    };
    med_mcc.push_back(median(mccs));
    med_frob.push_back(median(frobs));
  }

  std::ostringstream os;
  os << "median MCC";
  for (double m : med_mcc) os << " " << m;
  os << "; median frob";
  for (double f : med_frob) os << " " << f;
  detail = os.str();

  bool mcc_ok = med_mcc[0] <= med_mcc[1] + 1e-12 &&
                med_mcc[1] <= med_mcc[2] + 1e-12 && med_mcc[2] >= 0.9;
  bool frob_ok = med_frob[0] > med_frob[1] && med_frob[1] > med_frob[2];
  return mcc_ok && frob_ok;
}

// ---------------------------------------------------------------- 6 ----
bool criterion_performance(std::string& detail) {
  auto truth = data::generate_uniform(500, 10, 10.0, 77);
  auto X = data::sample_gaussian(truth, 500, 78);
  double bigM = 2.0 * truth.theta.cwiseAbs().maxCoeff();
  double lambda0 = 2.0 * std::sqrt(std::log(500.0) / 500.0);
  double lambda2 = lambda0;
  auto inst = load_instance(X, lambda0, lambda2, bigM, false);

  auto t0 = Clock::now();
  PenaltySpec pen = PenaltySpec::from_instance(inst, PairTag::L0L2Box);
  auto heur = cd::active_set_solve(inst, pen,
                                   SymmetricEstimate::diagonal(inst), {});
  double t_heur = seconds_since(t0);

  t0 = Clock::now();
  bnb::BnbConfig cfg;
  cfg.gap_tol = 0.05;
  cfg.time_limit = 150.0;
  auto res = bnb::solve_bnb(inst, cfg);
  double t_exact = seconds_since(t0);

  std::ostringstream os;
  os << "heuristic " << t_heur << "s (obj " << heur.objective << "), exact "
     << t_exact << "s (gap " << res.gap << ", " << res.nodes_explored
     << " nodes)";
  detail = os.str();
  return t_heur <= 10.0 && res.converged && t_exact <= 120.0;
}

// ---------------------------------------------------------------- 7 ----
bool criterion_determinism(std::string& detail) {
  const char* bin = std::getenv("GL0_BIN");
  if (!bin) {
    detail = "GL0_BIN not set";
    return false;
  }
  fs::path tmp = fs::temp_directory_path() / "gl0_acceptance_det";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  std::string dir = tmp.string();
  auto run = [&](const std::string& args) {
    std::string cmd = std::string(bin) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };
  if (run("generate --model banded --p 15 --k 4 --n 200 --cond 10 --seed 7 "
          "--out-dir " + dir) != 0) {
    detail = "generate failed";
    return false;
  }
  std::string base = "solve " + dir + "/data.csv --lambda0 0.3 --lambda2 0.1 "
                     "--big-m 4 --mode exact --gap-tol 0.01 --seed 1 ";
  bool ok = run(base + "--log-nodes " + dir + "/n1.jsonl --out " + dir +
                "/a.csv") == 0 &&
            run(base + "--log-nodes " + dir + "/n2.jsonl --out " + dir +
                "/b.csv") == 0;
  if (!ok) {
    detail = "solve failed";
    return false;
  }
  bool same_csv = slurp(tmp / "a.csv") == slurp(tmp / "b.csv");
  bool same_log = slurp(tmp / "n1.jsonl") == slurp(tmp / "n2.jsonl");
  fs::remove_all(tmp);
  detail = std::string("csv ") + (same_csv ? "identical" : "DIFFERS") +
           ", node log " + (same_log ? "identical" : "DIFFERS");
  return same_csv && same_log;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
    bool soft;
  };
  const Criterion criteria[] = {
      {"1 prox/conjugate oracle suite", criterion_prox_conjugates, false},
      {"2 coordinate descent correctness", criterion_cd, false},
      {"3 duality", criterion_duality, false},
      {"4 global optimality vs enumeration", criterion_bnb, false},
      {"5 statistical trend", criterion_statistical, false},
      {"6 performance smoke (soft)", criterion_performance, true},
      {"7 determinism", criterion_determinism, false},
  };

  bool all_ok = true;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s — %s\n", ok ? "PASS" : "FAIL", c.name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok && !c.soft) all_ok = false;
  }
  return all_ok ? 0 : 1;
}
