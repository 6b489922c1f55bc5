#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcp/config.hpp"
#include "vcp/env.hpp"
#include "vcp/federation.hpp"
#include "vcp/rl.hpp"

namespace vcp {

rl::NetSpec vehicle_net_spec(const ExperimentConfig& config);
rl::NetSpec rsu_net_spec(const ExperimentConfig& config);

/// Train configs with the epsilon decay sized to the planned number of agent steps.
rl::TrainConfig planned_vehicle_train(const ExperimentConfig& config);
rl::TrainConfig planned_rsu_train(const ExperimentConfig& config);

/// Candidate indices from a vehicle agent action; the flat head's joint action is
/// read bit by bit (bit k sends candidate k).
std::vector<int> vehicle_selection(const ExperimentConfig& config, std::span<const int> action, int valid_count);

/// One learner per roster slot plus the RSU learner.
struct AgentSet {
  std::vector<rl::Learner> vehicles;
  rl::Learner rsu;

  static AgentSet create(const ExperimentConfig& config);
  /// Writes vehicle_<i>.bdq, rsu.bdq and their JSON sidecars.
  void save(const std::string& dir) const;
  /// Loads what save() wrote. Throws IoError or DimensionError.
  void load(const std::string& dir);
};

enum class EvalMode { Trained, Random, Oracle };
EvalMode parse_eval_mode(const std::string& s);
const char* to_string(EvalMode m);

struct MetricsRow {
  int episode = 0;
  int frame = -1;  // -1 in per-episode rows
  int slot = -1;
  std::string agent;  // "v<i>" or "rsu"
  double reward = 0.0;
  double epsilon = 0.0;
  double loss = 0.0;
  double rate = 0.0;
  int delivered = 0;
  double objective = 0.0;
  long long steps = 0;
};

void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const MetricsRow& row);

struct EvalPoint {
  int episode = 0;
  double vehicle_reward = 0.0;  // mean over link-slots
  double rsu_reward = 0.0;      // mean over frames
  double objective = 0.0;       // mean per slot, unscaled
};

struct TrainReport {
  std::vector<EvalPoint> evals;
  std::vector<double> episode_reward;  // mean vehicle reward per link-slot, per episode
  std::vector<FedRound> fed_rounds;
  long long vehicle_steps = 0;
  long long rsu_steps = 0;
  long long metrics_rows = 0;
};

/// Rollout statistics for one policy.
struct EvalReport {
  EvalMode mode = EvalMode::Random;
  int slots = 0;
  long long links = 0;
  std::vector<double> rewards;          // per link-slot, scaled
  std::vector<double> oracle_rewards;   // counterfactual oracle on the same states
  double mean_reward = 0.0;
  double mean_oracle_reward = 0.0;
  double positive_fraction = 0.0;
  double mean_rate = 0.0;
  double mean_budget = 0.0;
  double mean_objective = 0.0;
  double mean_rsu_reward = 0.0;
};

/// Optional per-slot CSV sinks of an evaluation rollout.
struct EvalSinks {
  std::ostream* rewards = nullptr;       // slot,agent,reward,oracle_reward
  std::ostream* satisfaction = nullptr;  // slot,n,n_prime,f,blocks_sent,blocks_delivered
  std::ostream* channel = nullptr;       // slot,n,n_prime,k,class,h_db,i_dbm,rate
};

/// Two-timescale training loop with optional federation. Writes metrics.csv, eval.csv,
/// fed_rounds.csv and checkpoints under `out_dir` when it is non-empty.
TrainReport run_training(const ExperimentConfig& config, const MobilityTrace& trace, AgentSet& agents,
                         const std::string& out_dir = "");

/// Plays the first `slots` slots of `trace` as back-to-back episodes, each
/// starting with an empty roster and fresh maps.
/// Trained mode acts greedily with `agents`; random mode ignores them; oracle mode
/// picks blocks with full knowledge and uses the RSU policy of `agents` when given,
/// random pairing otherwise.
EvalReport evaluate(const ExperimentConfig& config, const MobilityTrace& trace, EvalMode mode, const AgentSet* agents,
                    int slots, std::uint64_t seed, const EvalSinks& sinks = {});

/// Greedy episodes starting at fixed slots; the periodic evaluation during training.
EvalPoint evaluate_episodes(const ExperimentConfig& config, const MobilityTrace& trace, const AgentSet& agents,
                            const std::vector<int>& starts, std::uint64_t seed);

/// (threshold, fraction of samples strictly above) on `points` evenly spaced thresholds in [0, max].
std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples, double max_value, int points);

void write_eval_summary(std::ostream& out, const EvalReport& r);

/// Trailing moving average; the first window-1 entries average what is available.
std::vector<double> moving_average(const std::vector<double>& v, int window);

/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> v, double q);

/// Reads metrics.csv per-episode vehicle rows and writes
/// episode,mean,smoothed,p05,p95,smoothed_p05,smoothed_p95.
void export_plotdata(std::istream& metrics, std::ostream& out, int window);

/// Training trace from the config (generated, or read from trace_file).
MobilityTrace training_trace(const ExperimentConfig& config);
/// Held-out trace: eval_seed, eval_trace_slots.
MobilityTrace evaluation_trace(const ExperimentConfig& config);

}  // namespace vcp
