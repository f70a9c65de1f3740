// gl0: sparse precision-matrix estimation via l0l2-penalized
// pseudo-likelihood, exact (branch-and-bound) or heuristic.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gl0/bnb.hpp"
#include "gl0/data_eval.hpp"
#include "gl0/duality.hpp"
#include "gl0/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int env_threads() {
  const char* env = std::getenv("PRECISION_BNB_THREADS");
  return env ? std::max(1, std::atoi(env)) : 1;
}

struct SolveArgs {
  std::string input;
  double lambda0 = 0.1;
  double lambda2 = 0.1;
  double big_m = 2.0;
  std::string mode = "heuristic";
  double gap_tol = 0.05;
  double time_limit = gl0::kInf;
  bool standardize = false;
  std::string out = "solution.csv";
  std::string log_nodes;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& args) {
  auto start = std::chrono::steady_clock::now();
  Eigen::MatrixXd data = gl0::io::read_csv(args.input);
  gl0::ProblemInstance inst = gl0::load_instance(
      data, args.lambda0, args.lambda2, args.big_m, args.standardize);

  json report;
  report["mode"] = args.mode;
  report["instance"] = {{"n", inst.n}, {"p", inst.p}, {"input", args.input}};
  report["hyperparameters"] = {{"lambda0", args.lambda0},
                               {"lambda2", args.lambda2},
                               {"bigM", args.big_m},
                               {"standardized", args.standardize},
                               {"seed", args.seed}};

  Eigen::MatrixXd theta;
  int exit_code = 0;
  if (args.mode == "exact") {
    gl0::bnb::BnbConfig cfg;
    cfg.gap_tol = args.gap_tol;
    cfg.time_limit = args.time_limit;
    std::ofstream node_log;
    if (!args.log_nodes.empty()) {
      node_log.open(args.log_nodes);
      cfg.node_log = &node_log;
    }
    gl0::bnb::BnbResult res = gl0::bnb::solve_bnb(inst, cfg);
    theta = res.incumbent.solution.dense();
    report["objective"] = res.incumbent.objective;
    report["gap"] = res.gap;
    report["lower_bound"] = res.lower_bound;
    report["counters"] = {{"nodes_explored", res.nodes_explored},
                          {"nodes_pruned", res.nodes_pruned},
                          {"incumbent_updates", res.incumbent_updates}};
    exit_code = res.converged ? 0 : 2;
  } else {
    gl0::Incumbent inc = gl0::bnb::initial_incumbent(inst);
    theta = inc.solution.dense();
    report["objective"] = inc.objective;
    exit_code = 0;
  }

  gl0::io::write_csv(args.out, theta);
  report["output"] = args.out;
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  fs::path report_path = fs::path(args.out).replace_extension(".json");
  std::ofstream(report_path) << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
  return exit_code;
}

struct GenerateArgs {
  std::string model = "banded";
  int p = 20;
  int k = 4;
  int n = 100;
  double cond = 10.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_generate(const GenerateArgs& args) {
  gl0::data::GroundTruth truth =
      args.model == "uniform"
          ? gl0::data::generate_uniform(args.p, args.k, args.cond, args.seed)
          : gl0::data::generate_banded(args.p, args.k, args.cond, args.seed);
  Eigen::MatrixXd data = gl0::data::sample_gaussian(truth, args.n, args.seed);
  fs::create_directories(args.out_dir);
  fs::path dir(args.out_dir);
  gl0::io::write_csv((dir / "data.csv").string(), data);
  gl0::io::write_csv((dir / "truth.csv").string(), truth.theta);
  json meta = {{"model", args.model}, {"p", args.p},       {"k", args.k},
               {"n", args.n},         {"cond", args.cond}, {"seed", args.seed}};
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';
  std::cout << meta.dump(2) << '\n';
  return 0;
}

struct TuneArgs {
  std::string train;
  std::string val;
  std::string grid = "4x4";
  std::string mode = "heuristic";
  double big_m = 2.0;
  double gap_tol = 0.05;
  int threads = env_threads();
  std::string out;
};

int run_tune(const TuneArgs& args) {
  Eigen::MatrixXd train = gl0::io::read_csv(args.train);
  Eigen::MatrixXd val = gl0::io::read_csv(args.val);
  gl0::data::GridSpec grid;
  if (std::sscanf(args.grid.c_str(), "%dx%d", &grid.n_lambda0,
                  &grid.n_lambda2) != 2)
    throw std::runtime_error("bad --grid, expected NxN");
  gl0::data::SolveMode mode = args.mode == "exact"
                                  ? gl0::data::SolveMode::Exact
                                  : gl0::data::SolveMode::Heuristic;
  gl0::data::TuneResult res = gl0::data::tune_grid(
      train, val, grid, mode, args.big_m, {}, args.gap_tol, args.threads);

  json table = json::array();
  for (const auto& gp : res.table)
    table.push_back({{"lambda0", gp.lambda0},
                     {"lambda2", gp.lambda2},
                     {"val_loss", gp.val_loss},
                     {"nnz", gp.nnz},
                     {"converged", gp.converged}});
  json report = {{"chosen", {{"lambda0", res.lambda0},
                             {"lambda2", res.lambda2},
                             {"val_loss", res.val_loss}}},
                 {"table", table}};
  if (!args.out.empty()) {
    gl0::io::write_csv(args.out, res.theta);
    report["output"] = args.out;
  }
  std::cout << report.dump(2) << '\n';
  return 0;
}

struct EvalArgs {
  std::string estimate;
  std::string truth;
};

int run_eval(const EvalArgs& args) {
  Eigen::MatrixXd hat = gl0::io::read_csv(args.estimate);
  Eigen::MatrixXd star = gl0::io::read_csv(args.truth);
  gl0::data::Metrics m = gl0::data::eval_metrics(star, hat);
  json report = {{"frob_rel", m.frob_rel}, {"mcc", m.mcc}, {"nnz", m.nnz}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse precision matrix estimation (l0l2 pseudo-likelihood)"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "estimate a precision matrix");
  solve->add_option("input", sa.input, "data CSV (rows = samples)")
      ->required();
  solve->add_option("--lambda0", sa.lambda0, "l0 penalty");
  solve->add_option("--lambda2", sa.lambda2, "ridge penalty");
  solve->add_option("--big-m", sa.big_m, "box bound on off-diagonals");
  solve->add_option("--mode", sa.mode)
      ->check(CLI::IsMember({"exact", "heuristic"}));
  solve->add_option("--gap-tol", sa.gap_tol, "MIP gap tolerance");
  solve->add_option("--time-limit", sa.time_limit, "seconds");
  solve->add_flag("--standardize", sa.standardize, "center columns first");
  solve->add_option("--out", sa.out, "solution CSV path");
  solve->add_option("--log-nodes", sa.log_nodes, "node log (LDJSON) path");
  solve->add_option("--seed", sa.seed);

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "synthetic instance");
  generate->add_option("--model", ga.model)
      ->check(CLI::IsMember({"uniform", "banded"}));
  generate->add_option("--p", ga.p)->required();
  generate->add_option("--k", ga.k)->required();
  generate->add_option("--n", ga.n)->required();
  generate->add_option("--cond", ga.cond);
  generate->add_option("--seed", ga.seed);
  generate->add_option("--out-dir", ga.out_dir);

  TuneArgs ta;
  auto* tune = app.add_subcommand("tune", "grid search over (lambda0, lambda2)");
  tune->add_option("--train", ta.train)->required();
  tune->add_option("--val", ta.val)->required();
  tune->add_option("--grid", ta.grid, "NxN");
  tune->add_option("--mode", ta.mode)
      ->check(CLI::IsMember({"exact", "heuristic"}));
  tune->add_option("--big-m", ta.big_m);
  tune->add_option("--gap-tol", ta.gap_tol);
  tune->add_option("--threads", ta.threads);
  tune->add_option("--out", ta.out, "write chosen fit CSV");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "support/estimation metrics");
  eval->add_option("--estimate", ea.estimate)->required();
  eval->add_option("--truth", ea.truth)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(sa);
    if (generate->parsed()) return run_generate(ga);
    if (tune->parsed()) return run_tune(ta);
    if (eval->parsed()) return run_eval(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
