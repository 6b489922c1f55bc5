#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vcp/config.hpp"
#include "vcp/error.hpp"
#include "vcp/harness.hpp"

namespace fs = std::filesystem;
using namespace vcp;

namespace {

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("VCP_OUTPUT_DIR"); env && *env) return env;
  return "vcp_out";
}

ExperimentConfig base_config(const std::string& preset) {
  if (preset == "desk") return desk_config();
  if (preset == "full") return full_config();
  throw ConfigError("preset must be desk or full");
}

ExperimentConfig read_config(const std::string& path, const std::string& preset) {
  const ExperimentConfig base = base_config(preset);
  ExperimentConfig c = path.empty() ? base : load_config(path, base);
  validate(c);
  return c;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << std::setprecision(10);
  return out;
}

void write_config(const fs::path& dir, const ExperimentConfig& c) {
  auto out = open_out(dir / "config.json");
  out << config_to_json(c) << '\n';
}

void run_eval_command(const ExperimentConfig& c, EvalMode mode, const std::string& checkpoint, int slots,
                      const std::string& out_flag) {
  const fs::path dir = fs::path(output_dir(out_flag)) / (std::string("eval_") + to_string(mode));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  AgentSet agents;
  const AgentSet* use = nullptr;
  if (!checkpoint.empty()) {
    agents = AgentSet::create(c);
    agents.load(checkpoint);
    use = &agents;
  } else if (mode == EvalMode::Trained) {
    throw ConfigError("trained evaluation needs --checkpoint");
  }
  const MobilityTrace trace = evaluation_trace(c);
  auto rewards = open_out(dir / "rewards.csv");
  auto sat = open_out(dir / "satisfaction.csv");
  auto chan = open_out(dir / "channel.csv");
  const EvalReport r = evaluate(c, trace, mode, use, slots > 0 ? slots : c.eval_trace_slots, c.eval_seed,
                                {&rewards, &sat, &chan});
  double top = 0.0;
  for (double v : r.oracle_rewards) top = std::max(top, v);
  for (double v : r.rewards) top = std::max(top, v);
  auto cc = open_out(dir / "ccdf.csv");
  cc << "reward,ccdf,oracle_ccdf\n";
  const auto a = ccdf(r.rewards, top, 201), b = ccdf(r.oracle_rewards, top, 201);
  for (std::size_t i = 0; i < a.size(); ++i) cc << a[i].first << ',' << a[i].second << ',' << b[i].second << '\n';
  auto sum = open_out(dir / "summary.csv");
  write_eval_summary(sum, r);
  std::cout << std::setprecision(6) << to_string(mode) << " mean_reward=" << r.mean_reward
            << " oracle_reward=" << r.mean_oracle_reward << " links=" << r.links << " -> " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcp: cooperative perception simulator and RL harness"};
  app.require_subcommand(1);
  std::string config_path, preset = "desk", out_flag;
  auto add_common = [&](CLI::App* s) {
    s->add_option("-c,--config", config_path, "flat JSON config");
    s->add_option("--preset", preset, "base config: desk or full");
    s->add_option("-o,--out", out_flag, "output directory (default $VCP_OUTPUT_DIR or ./vcp_out)");
  };

  auto* train = app.add_subcommand("train", "run training");
  add_common(train);

  std::string mode_name = "trained", checkpoint;
  int slots = 0;
  auto* eval = app.add_subcommand("eval", "evaluate on the held-out trace");
  add_common(eval);
  eval->add_option("-m,--mode", mode_name, "trained, random or oracle");
  eval->add_option("--checkpoint", checkpoint, "checkpoint directory");
  eval->add_option("--slots", slots, "slots to evaluate (default eval_trace_slots)");

  auto* oracle = app.add_subcommand("oracle", "evaluate the full-knowledge block oracle");
  add_common(oracle);
  oracle->add_option("--checkpoint", checkpoint, "checkpoint for the RSU policy (random pairing without)");
  oracle->add_option("--slots", slots, "slots to evaluate (default eval_trace_slots)");

  std::string metrics_path, plot_out;
  int window = 100;
  auto* plot = app.add_subcommand("plotdata", "smoothed curves with across-vehicle bands");
  plot->add_option("metrics", metrics_path, "metrics.csv from a training run")->required();
  plot->add_option("-w,--window", window, "moving-average window in episodes");
  plot->add_option("-o,--out", plot_out, "output CSV (default next to the metrics file)");

  auto* check = app.add_subcommand("validate-config", "validate a config and print it with defaults filled in");
  check->add_option("-c,--config", config_path, "flat JSON config")->required();
  check->add_option("--preset", preset, "base config: desk or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) {
      const ExperimentConfig c = read_config(config_path, preset);
      const fs::path dir = output_dir(out_flag);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("cannot create " + dir.string());
      write_config(dir, c);
      const MobilityTrace trace = training_trace(c);
      AgentSet agents = AgentSet::create(c);
      const TrainReport r = run_training(c, trace, agents, dir.string());
      std::cout << "episodes=" << c.episodes << " vehicle_steps=" << r.vehicle_steps << " rsu_steps=" << r.rsu_steps
                << " -> " << dir.string() << '\n';
    } else if (*eval) {
      run_eval_command(read_config(config_path, preset), parse_eval_mode(mode_name), checkpoint, slots, out_flag);
    } else if (*oracle) {
      run_eval_command(read_config(config_path, preset), EvalMode::Oracle, checkpoint, slots, out_flag);
    } else if (*plot) {
      std::ifstream in(metrics_path);
      if (!in) throw IoError("cannot read " + metrics_path);
      const fs::path out_path =
          plot_out.empty() ? fs::path(metrics_path).parent_path() / "plotdata.csv" : fs::path(plot_out);
      auto out = open_out(out_path);
      export_plotdata(in, out, window);
      std::cout << out_path.string() << '\n';
    } else if (*check) {
      std::cout << config_to_json(read_config(config_path, preset)) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: Error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
