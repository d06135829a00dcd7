// amber: PPO training engine with (adaptive) multi-batch experience replay.
//
//   amber run            single training run
//   amber sweep          grid of runs plus normalized-score summary
//   amber diag-isweight  IS-weight diagnostics (optionally across synth-K)

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "amber/config.hpp"
#include "amber/metrics.hpp"
#include "amber/trainer.hpp"

namespace fs = std::filesystem;
using namespace amber;

namespace {

// Every config key gets a CLI flag of the same name; values are parsed by
// the same code that reads config files so "inf" and friends behave
// identically everywhere.
struct ConfigCli {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (key = value lines)");
    add_value(cmd, "--env", "env", "environment id (pendulum, pointmass, synth-K)");
    add_value(cmd, "--total-steps", "total_steps", "total environment steps T");
    add_value(cmd, "--horizon", "horizon", "steps collected per iteration N");
    add_value(cmd, "--minibatch", "minibatch", "base mini-batch size M_PPO");
    add_value(cmd, "--replay-length", "replay_length", "stored batches L");
    add_value(cmd, "--epochs", "epochs", "update epochs per iteration S");
    add_value(cmd, "--gamma", "gamma", "discount factor");
    add_value(cmd, "--lambda", "lambda", "advantage estimator decay");
    add_value(cmd, "--step-size", "step_size", "initial Adam step size");
    add_value(cmd, "--clip", "clip", "initial clipping factor");
    add_value(cmd, "--batch-drop", "batch_drop", "initial batch drop factor (inf = keep all)");
    add_value(cmd, "--adaptive", "adaptive", "adaptive batch drop (true/false)");
    add_value(cmd, "--seed", "seed", "rng seed");
    add_value(cmd, "--normalize-advantages", "normalize_advantages",
              "per-mini-batch advantage standardization (true/false)");
    add_value(cmd, "--bootstrap-on-timeout", "bootstrap_on_timeout",
              "bootstrap value at step-limit boundaries (true/false)");
    add_flag(cmd, "--fixed-minibatch", "fixed_minibatch",
             "diagnostic: M = M_PPO with epochs spanning the whole pool");
    add_flag(cmd, "--episodic-minibatch", "episodic_minibatch",
             "test-only: contiguous segment mini-batches");
  }

  TrainConfig build() const {
    TrainConfig config;
    if (!config_path.empty()) {
      config = load_config_file(config_path, config);
    }
    for (const auto& [key, value] : overrides) {
      apply_config_value(config, key, value);
    }
    config.validate();
    return config;
  }

 private:
  void add_value(CLI::App* cmd, const std::string& flag, std::string key,
                 const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [this, key = std::move(key)](const std::string& v) { overrides.emplace_back(key, v); },
        help);
  }
  void add_flag(CLI::App* cmd, const std::string& flag, std::string key,
                const std::string& help) {
    cmd->add_flag_callback(
        flag, [this, key = std::move(key)] { overrides.emplace_back(key, "true"); }, help);
  }
};

struct RunResult {
  IterationRecord final_record;
  double mean_return_all = 0.0;
  long episodes = 0;
};

RunResult run_single(const TrainConfig& config, const fs::path& dir, bool echo) {
  fs::create_directories(dir);
  {
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest) throw std::runtime_error("cannot write " + (dir / "manifest.txt").string());
    write_manifest(manifest, config);
  }
  std::ofstream metrics(dir / "metrics.csv");
  if (!metrics) throw std::runtime_error("cannot write " + (dir / "metrics.csv").string());
  MetricsWriter writer(metrics);

  Trainer trainer(config);
  RunResult result;
  trainer.train([&](const IterationRecord& record) {
    writer.write(record);
    result.final_record = record;
    if (echo) {
      std::cout << "iter " << record.iteration << "  step " << record.global_step
                << "  return(100) " << format_double(record.mean_return_100) << "  active "
                << record.n_active << "  avg_is " << format_double(record.avg_is) << "\n";
    }
  });
  {
    std::ofstream params(dir / "params.txt");
    trainer.save_params(params);
  }
  result.mean_return_all = trainer.returns().mean_all();
  result.episodes = trainer.returns().completed();
  return result;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  size_t begin = 0;
  while (begin <= csv.size()) {
    const size_t end = csv.find(',', begin);
    if (end == std::string::npos) {
      out.push_back(csv.substr(begin));
      break;
    }
    out.push_back(csv.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

int cmd_run(const ConfigCli& cli, const std::string& out_dir) {
  const TrainConfig config = cli.build();
  const RunResult result = run_single(config, out_dir, true);
  std::cout << "done: " << result.episodes << " episodes, final return(100) "
            << format_double(result.final_record.mean_return_100) << "\n";
  std::cout << "wrote " << out_dir << "/metrics.csv\n";
  return 0;
}

struct SweepLists {
  std::string envs, replay_lengths, clips, batch_drops, seeds;
  int jobs = 1;
};

int cmd_sweep(const ConfigCli& cli, const std::string& out_dir, const SweepLists& lists) {
  const TrainConfig base = cli.build();

  const auto or_default = [](const std::string& list, const std::string& fallback) {
    return list.empty() ? std::vector<std::string>{fallback} : split_list(list);
  };
  const std::vector<std::string> envs = or_default(lists.envs, base.env);
  const std::vector<std::string> replay_lengths =
      or_default(lists.replay_lengths, std::to_string(base.replay_length));
  const std::vector<std::string> clips = or_default(lists.clips, format_double(base.clip));
  const std::vector<std::string> drops =
      or_default(lists.batch_drops, format_double(base.batch_drop));
  const std::vector<std::string> seeds = or_default(lists.seeds, std::to_string(base.seed));

  struct Cell {
    TrainConfig config;
    std::string label;
    fs::path dir;
  };
  std::vector<Cell> cells;
  for (const std::string& env : envs)
    for (const std::string& length : replay_lengths)
      for (const std::string& clip : clips)
        for (const std::string& drop : drops)
          for (const std::string& seed : seeds) {
            Cell cell;
            cell.config = base;
            apply_config_value(cell.config, "env", env);
            apply_config_value(cell.config, "replay_length", length);
            apply_config_value(cell.config, "clip", clip);
            apply_config_value(cell.config, "batch_drop", drop);
            apply_config_value(cell.config, "seed", seed);
            cell.config.validate();
            cell.label = "L=" + length + ",eps=" + clip + ",eps_b=" + drop;
            cell.dir = fs::path(out_dir) /
                       (env + "_L" + length + "_eps" + clip + "_epsb" + drop + "_seed" + seed);
            cells.push_back(std::move(cell));
          }

  std::vector<ScoreRow> rows(cells.size());
  std::atomic<size_t> next{0};
  const int jobs = std::max(1, lists.jobs);
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      ScoreRow row;
      row.task = cell.config.env;
      row.config_label = cell.label;
      row.seed = cell.config.seed;
      try {
        const RunResult result = run_single(cell.config, cell.dir, false);
        row.ok = true;
        row.final100 = result.final_record.mean_return_100;
        row.all_mean = result.mean_return_all;
      } catch (const std::exception& e) {
        row.ok = false;
        std::cerr << "cell " << cell.dir << " failed: " << e.what() << "\n";
      }
      rows[i] = row;
    }
  };
  std::vector<std::future<void>> pool;
  for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  fs::create_directories(out_dir);
  {
    std::ofstream scores(fs::path(out_dir) / "scores.csv");
    scores << "task,config,seed,status,final100,all_mean\n";
    for (const ScoreRow& row : rows) {
      scores << row.task << ",\"" << row.config_label << "\"," << row.seed << ","
             << (row.ok ? "ok" : "failed") << "," << format_double(row.final100) << ","
             << format_double(row.all_mean) << "\n";
    }
  }
  const std::vector<AnsRow> ans = compute_ans(rows);
  {
    std::ofstream summary(fs::path(out_dir) / "summary.csv");
    summary << "config,final_ans,speed_ans,cells\n";
    for (const AnsRow& row : ans) {
      summary << "\"" << row.config_label << "\"," << format_double(row.final_ans) << ","
              << format_double(row.speed_ans) << "," << row.cells << "\n";
    }
  }
  std::cout << "config ranking (final ANS / speed ANS):\n";
  for (const AnsRow& row : ans) {
    std::cout << "  " << row.config_label << "  " << format_double(row.final_ans) << " / "
              << format_double(row.speed_ans) << "\n";
  }
  const size_t failures =
      static_cast<size_t>(std::count_if(rows.begin(), rows.end(),
                                        [](const ScoreRow& r) { return !r.ok; }));
  if (failures == rows.size()) return 1;
  return 0;
}

int cmd_diag(const ConfigCli& cli, const std::string& out_dir, bool action_dim_sweep,
             const std::string& seeds_list) {
  const TrainConfig base = cli.build();
  if (!action_dim_sweep) {
    const RunResult result = run_single(base, out_dir, true);
    std::cout << "avg_is (final iteration): " << format_double(result.final_record.avg_is)
              << "\n";
    return 0;
  }

  // Action-dimension sweep: identical tasks up to dimension, logging the
  // batch-average weight of the previous batch (age 1) per K.
  const std::vector<std::string> seeds =
      seeds_list.empty() ? std::vector<std::string>{std::to_string(base.seed)}
                         : split_list(seeds_list);
  fs::create_directories(out_dir);
  std::ofstream summary(fs::path(out_dir) / "action_dim_summary.csv");
  summary << "K,seed,mean_rprime_lag1,iterations\n";
  std::cout << "K  seed  mean R'(l=1)\n";
  for (const int k : {1, 2, 4, 8, 16}) {
    for (const std::string& seed : seeds) {
      TrainConfig config = base;
      config.env = "synth-" + std::to_string(k);
      apply_config_value(config, "seed", seed);
      config.validate();
      const fs::path dir = fs::path(out_dir) / ("K" + std::to_string(k) + "_seed" + seed);
      fs::create_directories(dir);
      {
        std::ofstream manifest(dir / "manifest.txt");
        write_manifest(manifest, config);
      }
      std::ofstream metrics(dir / "metrics.csv");
      MetricsWriter writer(metrics);
      Trainer trainer(config);
      double sum = 0.0;
      long count = 0;
      trainer.train([&](const IterationRecord& record) {
        writer.write(record);
        if (record.r_prime.size() > 1) {
          sum += record.r_prime[1];
          ++count;
        }
      });
      const double mean = count > 0 ? sum / count : 0.0;
      summary << k << "," << seed << "," << format_double(mean) << "," << count << "\n";
      std::cout << k << "  " << seed << "  " << format_double(mean) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPO with (adaptive) multi-batch experience replay"};
  app.require_subcommand(1);

  ConfigCli run_cli, sweep_cli, diag_cli;
  std::string run_out = "runs/run";
  std::string sweep_out = "runs/sweep";
  std::string diag_out = "runs/diag";
  SweepLists lists;
  bool action_dim_sweep = false;
  std::string diag_seeds;

  CLI::App* run = app.add_subcommand("run", "single training run");
  run_cli.add_options(run);
  run->add_option("--out-dir", run_out, "run directory");

  CLI::App* sweep = app.add_subcommand("sweep", "grid of runs with an ANS summary");
  sweep_cli.add_options(sweep);
  sweep->add_option("--out-dir", sweep_out, "sweep directory");
  sweep->add_option("--envs", lists.envs, "comma list of environment ids");
  sweep->add_option("--L", lists.replay_lengths, "comma list of replay lengths");
  sweep->add_option("--eps", lists.clips, "comma list of initial clipping factors");
  sweep->add_option("--eps-b", lists.batch_drops, "comma list of initial drop factors");
  sweep->add_option("--seeds", lists.seeds, "comma list of seeds");
  sweep->add_option("--jobs", lists.jobs, "parallel runs");

  CLI::App* diag = app.add_subcommand("diag-isweight", "IS-weight diagnostics");
  diag_cli.add_options(diag);
  diag->add_option("--out-dir", diag_out, "diagnostics directory");
  diag->add_flag("--action-dim-sweep", action_dim_sweep,
                 "run synth-K for K in {1,2,4,8,16} and summarize R'(l=1)");
  diag->add_option("--seeds", diag_seeds, "comma list of seeds for the sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_cli, run_out);
    if (sweep->parsed()) return cmd_sweep(sweep_cli, sweep_out, lists);
    if (diag->parsed()) return cmd_diag(diag_cli, diag_out, action_dim_sweep, diag_seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
