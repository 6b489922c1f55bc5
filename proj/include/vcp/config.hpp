#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcp/channel.hpp"
#include "vcp/federation.hpp"
#include "vcp/rl.hpp"
#include "vcp/sensing.hpp"
#include "vcp/world.hpp"

namespace vcp {

enum class VehicleHead { Branching, Flat };
enum class RsuPolicy { Learned, Random };
enum class MetricsDetail { Episode, Step };

struct NetShape {
  std::vector<int> trunk{512, 256};
  int value_hidden = 128;
  int branch_hidden = 128;
};

struct ExperimentConfig {
  WorldConfig world;
  SensingParams sensing;
  int max_level = 3;   // L
  int max_past = 10;   // B_max_p
  NetConfig net;
  FedConfig fed;

  // Mobility.
  int trace_vehicles = 30;
  int trace_slots = 30000;
  int eval_trace_slots = 20000;
  std::uint64_t eval_seed = 1001;
  std::string trace_file;  // optional CSV replacing the generated training trace

  // Timescales and schedule.
  int frame_slots = 5;       // X
  int episode_frames = 10;   // Z
  int episodes = 2000;
  int eval_period = 100;
  int eval_episodes = 10;
  double eps_decay_fraction = 0.6;

  // Agents.
  VehicleHead vehicle_head = VehicleHead::Branching;
  long long flat_output_guard = 1 << 16;
  RsuPolicy rsu_policy = RsuPolicy::Learned;
  NetShape vehicle_net;
  NetShape rsu_net;
  rl::TrainConfig vehicle_train;
  rl::TrainConfig rsu_train;
  bool fuse_received = false;  // adopt received blocks into the receiver map

  MetricsDetail metrics_detail = MetricsDetail::Episode;
  int checkpoint_period = 0;  // episodes; 0 writes only the final checkpoint
  std::uint64_t seed = 1;

  double reward_scale() const { return world.cell_m * world.cell_m; }
  int slots_per_episode() const { return frame_slots * episode_frames; }
  int candidate_width() const;
};

/// Full-scale dimensions and rates on the default world.
ExperimentConfig full_config();
/// Small networks and buffers for a single-core desk run (N=4, K=4, L=3).
ExperimentConfig desk_config();

/// Throws ConfigError on any inconsistency.
void validate(const ExperimentConfig& config);

/// Flat JSON object; every key is optional and overrides `base`. Unknown keys
/// raise ConfigError.
ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base);
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace vcp
