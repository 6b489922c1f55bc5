#pragma once

#include <optional>
#include <vector>

#include "vcp/agents.hpp"
#include "vcp/channel.hpp"
#include "vcp/config.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/satisfaction.hpp"
#include "vcp/sensing.hpp"
#include "vcp/world.hpp"

namespace vcp {

/// One directed link in a slot.
struct LinkRecord {
  int tx = -1;  // roster slots
  int rx = -1;
  int rb = -1;
  LosClass los = LosClass::Los;
  double gain_db = 0.0;
  double interference_dbm = 0.0;
  double rate = 0.0;  // blocks per slot
  int budget = 0;
  int sent = 0;
  int delivered = 0;
  double satisfaction = 0.0;  // receiver's f for this link, unscaled
  double reward = 0.0;        // sender's scaled reward
};

struct SlotOutcome {
  int slot = 0;
  std::vector<LinkRecord> links;
  std::vector<double> reward;  // per roster slot; 0 for unpaired present vehicles
  double objective = 0.0;      // unscaled
};

/// Simulator state for one episode or evaluation rollout: roster, per-vehicle
/// maps and inventories, frame decision and rate credit.
class Env {
 public:
  Env(const ExperimentConfig& config, const MobilityTrace& trace, std::uint64_t seed);

  const ExperimentConfig& config() const { return config_; }
  const World& world() const { return world_; }
  const MobilityTrace& trace() const { return *trace_; }
  int roster_size() const { return n_; }
  int slot() const { return slot_; }
  double now() const { return slot_ * config_.world.slot_s; }
  bool finished() const { return slot_ >= trace_->slot_count(); }

  /// Slots from which `length` slots fit and at least `min_present` vehicles are
  /// present throughout; sorted.
  std::vector<int> episode_starts(int length, int min_present, int stride = 1) const;

  /// Starts a rollout at `slot` with an empty roster, fresh maps and inventories.
  void reset(int slot);

  /// Frame boundary: drops departed vehicles and fills free roster slots in entry order.
  void begin_frame();
  std::vector<float> rsu_observation() const;
  /// Applies (E, eta) for the frame; pairs touching an absent slot are dropped.
  void set_decision(const RsuDecision& d);
  const RsuDecision& decision() const { return decision_; }

  /// Updates kinematics at the current slot; vehicles that left become absent.
  /// Then every present vehicle senses, fuses its reading and rebuilds its quadtree.
  void sense();

  bool present(int i) const { return roster_[static_cast<std::size_t>(i)] >= 0; }
  /// Present and paired with a present vehicle.
  bool active(int i) const;
  int partner(int i) const;
  int vehicle_id(int i) const { return roster_[static_cast<std::size_t>(i)]; }
  const std::optional<VehicleState>& state(int i) const { return states_[static_cast<std::size_t>(i)]; }

  std::vector<float> vehicle_observation(int i) const;
  int valid_candidates(int i) const;
  const std::vector<QuadBlock>& candidates(int i) const { return candidates_[static_cast<std::size_t>(i)]; }
  const InterestField& interest(int i) const { return interest_[static_cast<std::size_t>(i)]; }

  /// Rates and block budgets of the active links for this slot (draws fading).
  /// Must precede transmit().
  void prepare_links();
  int budget(int tx) const { return budget_[static_cast<std::size_t>(tx)]; }

  /// Sends the selected candidate indices of every active vehicle, truncates to
  /// the budget, scores satisfaction and fuses deliveries.
  SlotOutcome transmit(const std::vector<std::vector<int>>& selections);

  void advance() { ++slot_; }

 private:
  ExperimentConfig config_;
  const MobilityTrace* trace_;
  World world_;
  int n_;
  int slot_ = 0;
  Rng fading_rng_;
  Rng delivery_rng_;
  Rng sensor_rng_;

  std::vector<int> roster_;
  std::vector<std::optional<VehicleState>> states_;
  std::vector<PerceptionMap> maps_;
  std::vector<BlockInventory> inventories_;
  std::vector<std::vector<QuadBlock>> candidates_;
  std::vector<InterestField> interest_;
  std::vector<int> used_ids_;

  RsuDecision decision_;
  RateCredit credit_;
  std::vector<LinkRecord> links_;
  std::vector<int> budget_;
  bool links_ready_ = false;
};

}  // namespace vcp
