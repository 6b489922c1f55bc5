#include "vcp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vcp/error.hpp"
#include "vcp/quadtree.hpp"

namespace vcp {

using nlohmann::json;

int ExperimentConfig::candidate_width() const { return quadtree_candidate_cap(max_level) + max_past; }

ExperimentConfig full_config() {
  ExperimentConfig c;
  c.world.n_max = 4;
  c.world.sensing_radius_m = 20.0;
  c.world.reliability = 1.0;
  c.net.rb_count = 10;
  c.max_level = 5;
  c.sensing.t_int_s = 2.0;
  c.vehicle_net = {{512, 256}, 128, 128};
  c.rsu_net = {{512, 256}, 128, 128};
  c.vehicle_train.buffer_capacity = 1000000;
  c.rsu_train.buffer_capacity = 1000000;
  return c;
}

ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.world.n_max = 4;
  c.net.rb_count = 4;
  c.max_level = 3;
  c.vehicle_net = {{64, 64}, 32, 16};
  c.rsu_net = {{64, 64}, 32, 32};
  c.vehicle_train.buffer_capacity = 50000;
  c.rsu_train.buffer_capacity = 20000;
  c.rsu_train.warmup = 200;
  c.rsu_train.target_sync = 200;
  return c;
}

namespace {

const char* name(VehicleHead h) { return h == VehicleHead::Flat ? "dqn" : "bdq"; }
const char* name(RsuPolicy p) { return p == RsuPolicy::Random ? "random" : "learned"; }
const char* name(MetricsDetail d) { return d == MetricsDetail::Step ? "step" : "episode"; }

template <typename T>
void read_value(const json& j, T& out, const std::string& key) {
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

void read_value(const json& j, VehicleHead& out, const std::string& key) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "bdq") out = VehicleHead::Branching;
  else if (s == "dqn") out = VehicleHead::Flat;
  else throw ConfigError("config key '" + key + "' must be \"bdq\" or \"dqn\"");
}

void read_value(const json& j, RsuPolicy& out, const std::string& key) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "learned") out = RsuPolicy::Learned;
  else if (s == "random") out = RsuPolicy::Random;
  else throw ConfigError("config key '" + key + "' must be \"learned\" or \"random\"");
}

void read_value(const json& j, MetricsDetail& out, const std::string& key) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "episode") out = MetricsDetail::Episode;
  else if (s == "step") out = MetricsDetail::Step;
  else throw ConfigError("config key '" + key + "' must be \"episode\" or \"step\"");
}

template <typename T>
json write_value(const T& v) {
  return json(v);
}
json write_value(VehicleHead v) { return name(v); }
json write_value(RsuPolicy v) { return name(v); }
json write_value(MetricsDetail v) { return name(v); }

/// Calls f(key, field) for every configurable field.
template <typename C, typename F>
void visit(C& c, F&& f) {
  f("extent_m", c.world.extent_m);
  f("cell_m", c.world.cell_m);
  f("slot_s", c.world.slot_s);
  f("n_max", c.world.n_max);
  f("world_seed", c.world.seed);
  f("sensing_radius_m", c.world.sensing_radius_m);
  f("reliability", c.world.reliability);
  f("speed_cap_mps", c.world.speed_cap_mps);
  f("ew_road_width_m", c.world.junction.ew_road_width_m);
  f("ns_road_width_m", c.world.junction.ns_road_width_m);
  f("lane_offset_m", c.world.junction.lane_offset_m);
  f("stop_line_offset_m", c.world.junction.stop_line_offset_m);
  f("building_setback_m", c.world.junction.building_setback_m);
  f("green_s", c.world.signal.green_s);
  f("yellow_s", c.world.signal.yellow_s);
  f("all_red_s", c.world.signal.all_red_s);
  f("speed_min_mps", c.world.motion.speed_min_mps);
  f("speed_max_mps", c.world.motion.speed_max_mps);

  f("mu", c.sensing.mu);
  f("t_int_s", c.sensing.t_int_s);
  f("max_level", c.max_level);
  f("max_past", c.max_past);

  f("rb_count", c.net.rb_count);
  f("rb_bandwidth_hz", c.net.rb_bandwidth_hz);
  f("tx_power_dbm", c.net.tx_power_dbm);
  f("noise_density_dbm_hz", c.net.noise_density_dbm_hz);
  f("carrier_hz", c.net.carrier_hz);
  f("block_bits", c.net.block_bits);
  f("fading", c.net.channel.fading);
  f("los_intercept_db", c.net.channel.los_intercept_db);
  f("los_slope_db", c.net.channel.los_slope_db);
  f("wlos_extra_db", c.net.channel.wlos_extra_db);
  f("nlos_extra_db", c.net.channel.nlos_extra_db);
  f("nlos_corner_db_per_m", c.net.channel.nlos_corner_db_per_m);

  f("fed_enabled", c.fed.enabled);
  f("fed_period", c.fed.period_frames);

  f("trace_vehicles", c.trace_vehicles);
  f("trace_slots", c.trace_slots);
  f("eval_trace_slots", c.eval_trace_slots);
  f("eval_seed", c.eval_seed);
  f("trace_file", c.trace_file);

  f("frame_slots", c.frame_slots);
  f("episode_frames", c.episode_frames);
  f("episodes", c.episodes);
  f("eval_period", c.eval_period);
  f("eval_episodes", c.eval_episodes);
  f("eps_decay_fraction", c.eps_decay_fraction);

  f("vehicle_head", c.vehicle_head);
  f("flat_output_guard", c.flat_output_guard);
  f("rsu_policy", c.rsu_policy);
  f("fuse_received", c.fuse_received);

  f("trunk", c.vehicle_net.trunk);
  f("value_hidden", c.vehicle_net.value_hidden);
  f("branch_hidden", c.vehicle_net.branch_hidden);
  f("lr", c.vehicle_train.lr);
  f("batch", c.vehicle_train.batch);
  f("gamma", c.vehicle_train.gamma);
  f("target_sync", c.vehicle_train.target_sync);
  f("warmup", c.vehicle_train.warmup);
  f("eps_start", c.vehicle_train.eps_start);
  f("eps_end", c.vehicle_train.eps_end);
  f("buffer_capacity", c.vehicle_train.buffer_capacity);
  f("grad_clip", c.vehicle_train.grad_clip);
  f("train_every", c.vehicle_train.train_every);
  f("head_scale", c.vehicle_train.head_scale);

  f("rsu_trunk", c.rsu_net.trunk);
  f("rsu_value_hidden", c.rsu_net.value_hidden);
  f("rsu_branch_hidden", c.rsu_net.branch_hidden);
  f("rsu_lr", c.rsu_train.lr);
  f("rsu_batch", c.rsu_train.batch);
  f("rsu_gamma", c.rsu_train.gamma);
  f("rsu_target_sync", c.rsu_train.target_sync);
  f("rsu_warmup", c.rsu_train.warmup);
  f("rsu_buffer_capacity", c.rsu_train.buffer_capacity);

  f("metrics_detail", c.metrics_detail);
  f("checkpoint_period", c.checkpoint_period);
  f("seed", c.seed);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  validate(c.world);
  validate(c.net);
  validate(c.fed);
  validate(c.vehicle_train);
  validate(c.rsu_train);
  sensing_window_side(c.world);
  if (!(c.sensing.mu > 0.0 && c.sensing.mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
  if (!(c.sensing.t_int_s > 0.0)) throw ConfigError("t_int_s must be positive");
  if (c.max_level < 1 || c.max_level > 5) throw ConfigError("max_level must lie in [1, 5]");
  if ((1 << c.max_level) > sensing_window_side(c.world))
    throw ConfigError("2^max_level exceeds the sensing window in cells");
  if (c.max_past < 0) throw ConfigError("max_past must be non-negative");
  if (c.frame_slots < 1 || c.episode_frames < 1) throw ConfigError("frame_slots and episode_frames must be at least 1");
  if (c.episodes < 0) throw ConfigError("episodes must be non-negative");
  if (c.eval_period < 0 || c.eval_episodes < 0) throw ConfigError("eval settings must be non-negative");
  if (c.eps_decay_fraction < 0.0 || c.eps_decay_fraction > 1.0) throw ConfigError("eps_decay_fraction must lie in [0, 1]");
  if (c.trace_vehicles < 2) throw ConfigError("trace_vehicles must be at least 2");
  if (c.trace_slots < c.slots_per_episode() + 1) throw ConfigError("trace shorter than one episode");
  if (c.eval_trace_slots < c.frame_slots) throw ConfigError("eval trace shorter than one frame");
  if (c.checkpoint_period < 0) throw ConfigError("checkpoint_period must be non-negative");
  if (c.net.slot_s != c.world.slot_s) throw ConfigError("net and world slot durations differ");
  if (c.vehicle_head == VehicleHead::Flat) {
    const int b = c.candidate_width();
    if (b >= 62 || (1LL << b) > c.flat_output_guard)
      throw GuardExceeded("flat DQN head needs 2^" + std::to_string(b) + " outputs, above flat_output_guard");
  }
}

ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");
  ExperimentConfig c = base;
  std::set<std::string> seen;
  visit(c, [&](const char* key, auto& field) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (it->is_object()) throw ConfigError(std::string("config key '") + key + "' must not be nested");
    read_value(*it, field, key);
    seen.insert(key);
  });
  for (const auto& [k, v] : j.items())
    if (!seen.count(k)) throw ConfigError("unknown config key '" + k + "'");
  c.net.slot_s = c.world.slot_s;
  return c;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string config_to_json(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  json j = json::object();
  visit(c, [&](const char* key, auto& field) { j[key] = write_value(field); });
  return j.dump(2);
}

}  // namespace vcp
