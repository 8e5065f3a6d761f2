#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "rbvf/checkpoint.hpp"
#include "rbvf/config.hpp"
#include "rbvf/csv.hpp"
#include "rbvf/regression.hpp"
#include "rbvf/theory.hpp"

namespace fs = std::filesystem;
using namespace rbvf;

namespace {

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool overwrite = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_file, "key=value config file");
  cmd->add_option("-s,--set", args.overrides, "override: key=value (repeatable)");
  cmd->add_option("-o,--out", args.out_dir, "output directory");
  cmd->add_flag("--overwrite", args.overwrite, "allow writing into a nonempty directory");
}

RunConfig resolve(const CommonArgs& args) {
  std::vector<std::string> ov = args.overrides;
  if (!args.out_dir.empty()) ov.push_back("out_dir=" + args.out_dir);
  if (args.overwrite) ov.push_back("overwrite=true");
  return parse_config(args.config_file, ov);
}

TrainResult train_one(const RunConfig& cfg, std::uint64_t seed) {
  auto env = make_env(cfg.env);
  if (cfg.agent == "rbf-ddpg") {
    const CriticDelta delta =
        cfg.critic_delta == "sarsa" ? CriticDelta::Sarsa : CriticDelta::QLearning;
    return run_rbf_ddpg(cfg.agent_cfg, *env, cfg.episodes, seed, delta);
  }
  return run_rbf_dqn(cfg.agent_cfg, *env, cfg.episodes, seed);
}

int cmd_train(const CommonArgs& args) {
  const RunConfig cfg = resolve(args);
  prepare_output_dir(cfg);
  const fs::path dir(cfg.out_dir);
  const auto env_spec = make_env(cfg.env)->spec();
  const RbvfModelSpec model_spec = make_model_spec(cfg.agent_cfg, env_spec);

  for (std::uint64_t seed : cfg.seeds) {
    const TrainResult res = train_one(cfg, seed);
    const std::string tag = "seed" + std::to_string(seed);
    write_training_log(dir / (tag + "_log.csv"), res.log);
    if (!res.log.empty()) write_learning_curve(dir / (tag + "_curve.csv"), res.log);
    save_checkpoint(dir / (tag + "_final.ckpt"), model_spec, res.params);
    double final_mean = 0.0;
    const std::size_t tail = std::min<std::size_t>(20, res.log.size());
    for (std::size_t i = res.log.size() - tail; i < res.log.size(); ++i)
      final_mean += res.log[i].episode_return;
    if (tail > 0) final_mean /= static_cast<double>(tail);
    std::cout << "seed " << seed << ": final-20 mean return " << final_mean << ", AUC "
              << area_under_curve(res.log) << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  RunConfig cfg = resolve(args);
  if (cfg.sweep_values.empty())
    throw ConfigError("sweep requires sweep_values (e.g. -s sweep_values=5,10,20)");
  prepare_output_dir(cfg);
  const fs::path dir(cfg.out_dir);

  std::vector<SweepRow> rows;
  for (double value : cfg.sweep_values) {
    RunConfig run = cfg;
    if (cfg.sweep_axis == "N")
      run.agent_cfg.num_centroids = static_cast<int>(value);
    else
      run.agent_cfg.beta = value;
    for (std::uint64_t seed : cfg.seeds) {
      const TrainResult res = train_one(run, seed);
      SweepRow row;
      row.axis_value = value;
      row.seed = seed;
      row.auc = area_under_curve(res.log);
      const std::size_t tail = std::min<std::size_t>(20, res.log.size());
      for (std::size_t i = res.log.size() - tail; i < res.log.size(); ++i)
        row.final_mean_return += res.log[i].episode_return;
      if (tail > 0) row.final_mean_return /= static_cast<double>(tail);
      rows.push_back(row);
      std::cout << cfg.sweep_axis << "=" << value << " seed=" << seed << " auc=" << row.auc
                << "\n";
    }
  }
  write_sweep_summary(dir / "sweep_summary.csv", rows);
  return 0;
}

int cmd_regress(const CommonArgs& args) {
  const RunConfig cfg = resolve(args);
  prepare_output_dir(cfg);
  const fs::path dir(cfg.out_dir);

  RegressionTask task;
  task.num_centroids = cfg.agent_cfg.num_centroids;
  task.beta = cfg.agent_cfg.beta;
  task.seed = cfg.seeds.front();
  const RegressionFit fit = fit_regression(task);

  {
    std::ofstream out(dir / "mse_curve.csv");
    out.precision(12);
    out << "step,train_mse,test_mse\n";
    for (std::size_t i = 0; i < fit.train_mse.size(); ++i)
      out << i << "," << fit.train_mse[i] << "," << fit.test_mse[i] << "\n";
  }
  {
    const int res = 61;
    Matrix queries(res * res, 2);
    for (int i = 0; i < res; ++i)
      for (int j = 0; j < res; ++j) {
        queries(i * res + j, 0) = -3.0 + 6.0 * i / (res - 1);
        queries(i * res + j, 1) = -3.0 + 6.0 * j / (res - 1);
      }
    const Vector pred = predict(fit, queries);
    std::ofstream out(dir / "surface.csv");
    out.precision(12);
    out << "a0,a1,target,prediction\n";
    for (Eigen::Index r = 0; r < queries.rows(); ++r)
      out << queries(r, 0) << "," << queries(r, 1) << ","
          << regression_target(queries.row(r).transpose()) << "," << pred(r) << "\n";
  }
  std::cout << "final train MSE " << fit.train_mse.back() << ", test MSE " << fit.test_mse.back()
            << "\n";
  return 0;
}

int cmd_verify_theorems(const CommonArgs& args) {
  const RunConfig cfg = resolve(args);
  prepare_output_dir(cfg);
  const fs::path dir(cfg.out_dir);
  std::vector<GapReport> reports;

  // 1-D randomized frozen readouts: grid max equals centroid max.
  std::mt19937_64 rng(cfg.seeds.front());
  std::uniform_int_distribution<int> pick_n(2, 20);
  std::uniform_real_distribution<double> pick_beta(0.1, 3.0);
  std::uniform_real_distribution<double> pick_val(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = pick_n(rng);
    FrozenReadout r;
    r.locations.resize(n, 1);
    r.values.resize(n);
    for (int i = 0; i < n; ++i) {
      r.locations(i, 0) = pick_val(rng);
      r.values(i) = pick_val(rng);
    }
    reports.push_back(verify_gap_1d(r, pick_beta(rng), -2.0, 2.0, 100000));
  }

  // d=2 fixed 3-centroid readout across a beta sweep.
  FrozenReadout r2;
  r2.locations.resize(3, 2);
  r2.locations << -1.0, -1.0, -0.3, -1.0, -1.0, 1.0;
  r2.values.resize(3);
  r2.values << 1.0, 0.9, -1.0;
  const Vector lo = Vector::Constant(2, -2.0), hi = Vector::Constant(2, 2.0);
  for (const auto& rep :
       gap_vs_beta(r2, {0.25, 1.0, 1.5, 2.0, 4.0, 8.0}, lo, hi, 400))
    reports.push_back(rep);

  write_gap_reports(dir / "gaps.csv", reports);
  int violations = 0;
  for (const auto& rep : reports)
    if (rep.dims == 1 ? std::abs(rep.gap) > rep.tolerance : rep.gap < -rep.tolerance)
      ++violations;
  std::cout << reports.size() << " gap reports written, " << violations << " violations\n";
  return violations == 0 ? 0 : 1;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint, std::uint64_t seed,
             int episodes) {
  const RunConfig cfg = resolve(args);
  const Checkpoint ck = load_checkpoint(checkpoint);
  RbvfNetwork net(ck.spec);
  auto env = make_env(cfg.env);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    const double ret = evaluate_greedy(net, ck.params, *env, seed + static_cast<std::uint64_t>(e));
    std::cout << "episode " << e << ": return " << ret << "\n";
    total += ret;
  }
  std::cout << "mean return " << total / episodes << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep radial-basis value functions: experiments and verification"};
  app.require_subcommand(1);

  CommonArgs train_args, sweep_args, regress_args, verify_args, eval_args;
  std::string eval_checkpoint;
  std::uint64_t eval_seed = 0;
  int eval_episodes = 1;

  auto* train = app.add_subcommand("train", "Train RBF-DQN or RBF-DDPG");
  add_common(train, train_args);
  auto* sweep = app.add_subcommand("sweep", "Hyperparameter sweep over N or beta");
  add_common(sweep, sweep_args);
  auto* regress = app.add_subcommand("regress", "Supervised RBF-network regression demo");
  add_common(regress, regress_args);
  auto* verify = app.add_subcommand("verify-theorems", "Grid-vs-centroid gap measurements");
  add_common(verify, verify_args);
  auto* eval = app.add_subcommand("eval", "Greedy rollout from a checkpoint");
  add_common(eval, eval_args);
  eval->add_option("checkpoint", eval_checkpoint, "checkpoint file")->required();
  eval->add_option("--seed", eval_seed, "environment seed");
  eval->add_option("--episodes", eval_episodes, "number of greedy episodes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (regress->parsed()) return cmd_regress(regress_args);
    if (verify->parsed()) return cmd_verify_theorems(verify_args);
    if (eval->parsed()) return cmd_eval(eval_args, eval_checkpoint, eval_seed, eval_episodes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
