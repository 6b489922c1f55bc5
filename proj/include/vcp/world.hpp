#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vcp/common.hpp"

namespace vcp {

/// Two straight roads crossing at the world center, one lane per direction.
struct JunctionGeometry {
  double ew_road_width_m = 10.0;  // east-west road
  double ns_road_width_m = 10.0;  // north-south road
  double lane_offset_m = 2.5;     // lane center to road center line
  double stop_line_offset_m = 8.0;  // stop line distance from junction center
  double building_setback_m = 3.0;  // gap between road edge and corner building
};

struct SignalPlan {
  double green_s = 12.0;
  double yellow_s = 3.0;
  double all_red_s = 3.0;

  double cycle_s() const { return 2.0 * (green_s + yellow_s + all_red_s); }
};

struct MotionParams {
  double accel_mps2 = 2.0;
  double decel_mps2 = 4.0;
  double min_gap_m = 2.0;
  double speed_min_mps = 8.0;
  double speed_max_mps = 14.0;
  double spawn_gap_m = 5.0;
};

struct WorldConfig {
  double extent_m = 160.0;
  double cell_m = 1.25;
  JunctionGeometry junction;
  SignalPlan signal;
  MotionParams motion;
  double slot_s = 0.002;  // tau
  int n_max = 4;          // N
  std::uint64_t seed = 1;
  double sensing_radius_m = 20.0;  // r
  double reliability = 1.0;        // lambda_n, shared by all vehicles
  double speed_cap_mps = 20.0;     // observation normalization

  int cells() const;
  Vec2 center() const { return {extent_m / 2.0, extent_m / 2.0}; }
};

/// Throws ConfigError on an inconsistent world description.
void validate(const WorldConfig& config);

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

/// Corner buildings (static occluders), SW, SE, NW, NE.
std::array<Rect, 4> buildings(const WorldConfig& config);

/// Whether the segment a-b passes through the interior of r.
bool segment_intersects(const Rect& r, Vec2 a, Vec2 b);

enum class Approach : std::uint8_t { Eastbound = 0, Westbound = 1, Northbound = 2, Southbound = 3 };

struct Lane {
  Vec2 start;      // world-edge entry point of the lane center line
  Vec2 direction;  // unit vector of travel
  double heading = 0.0;
};

Lane lane_for(Approach approach, const WorldConfig& config);

/// Arc length along any lane at which the stop line sits.
double stop_line_position(const WorldConfig& config);

enum class SignalPhase : std::uint8_t { Green, Yellow, Red };

/// East-west approaches get the first green of each cycle.
SignalPhase signal_phase(Approach approach, double time_s, const SignalPlan& plan);

struct VehicleState {
  int id = -1;
  Vec2 position;
  double speed = 0.0;    // m/s
  double heading = 0.0;  // radians, direction of motion
  double length_m = 4.5;
  double width_m = 1.8;
  double reliability = 1.0;
  double sensing_radius_m = 20.0;
};

/// Footprint membership of a world point (oriented rectangle).
bool in_footprint(const VehicleState& v, Vec2 p);

/// Interest of the vehicle in location x: linear falloff inside the
/// forward circle of diameter v * t_int, zero elsewhere and when stationary.
double roi_weight(const VehicleState& vehicle, Vec2 x, double t_int_s);

struct TraceSample {
  int slot = 0;
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double heading = 0.0;
  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct VehicleInfo {
  int id = 0;
  double length_m = 4.5;
  double width_m = 1.8;
  double reliability = 1.0;
  Approach approach = Approach::Eastbound;
  int entry_slot = 0;
  double target_speed_mps = 10.0;
  friend bool operator==(const VehicleInfo&, const VehicleInfo&) = default;
};

/// Per-slot kinematics of every vehicle inside the world.
class MobilityTrace {
 public:
  MobilityTrace() = default;
  /// `samples` must be sorted by (slot, id).
  MobilityTrace(int slot_count, std::vector<VehicleInfo> vehicles, std::vector<TraceSample> samples);

  int slot_count() const { return slot_count_; }
  std::span<const TraceSample> at(int slot) const;
  const TraceSample* find(int slot, int id) const;
  const std::vector<VehicleInfo>& vehicles() const { return vehicles_; }
  const VehicleInfo* info(int id) const;
  const std::vector<TraceSample>& samples() const { return samples_; }

  /// First and last slot (inclusive) in which the vehicle is present; {-1,-1} if never.
  std::pair<int, int> presence(int id) const;

  /// CSV with header slot,id,x,y,v,heading (m, m/s, rad).
  void write_csv(std::ostream& out) const;
  /// Vehicle dimensions are not part of the CSV; imported vehicles use a car footprint
  /// and the world's reliability.
  static MobilityTrace read_csv(std::istream& in, const WorldConfig& config);

  friend bool operator==(const MobilityTrace&, const MobilityTrace&) = default;

 private:
  int slot_count_ = 0;
  std::vector<VehicleInfo> vehicles_;
  std::vector<TraceSample> samples_;
  std::vector<std::size_t> slot_begin_;  // slot_count_ + 1 offsets
  std::vector<std::pair<int, int>> presence_;  // indexed like vehicles_
};

/// Lane-constrained approach/stop/cross/exit mobility with randomized entry
/// times, lanes, footprints and target speeds. Deterministic in (config, seed).
MobilityTrace generate_trace(const WorldConfig& config, int n_vehicles, std::uint64_t seed, int slots = 30000);

/// Cell states are Occupied or Unoccupied only.
using GroundTruth = Grid2D<CellState>;

class World {
 public:
  explicit World(WorldConfig config);

  const WorldConfig& config() const { return config_; }
  int cells() const { return cells_; }
  const GroundTruth& static_map() const { return static_map_; }

  CellIndex cell_of(Vec2 p) const;
  Vec2 cell_center(CellIndex c) const;
  Vec2 cell_center(int ix, int iy) const { return cell_center(CellIndex{ix, iy}); }

  VehicleState vehicle_state(const MobilityTrace& trace, const TraceSample& sample) const;
  std::vector<VehicleState> vehicles_at(const MobilityTrace& trace, int slot) const;

  /// Cells whose center lies in the footprint, plus the cell under the vehicle center.
  std::vector<CellIndex> footprint_cells(const VehicleState& v) const;

  /// Ground truth at slot t: static obstacles plus vehicle footprints. Pure.
  GroundTruth step_world(const MobilityTrace& trace, int slot) const;

 private:
  WorldConfig config_;
  int cells_ = 0;
  GroundTruth static_map_;
};

}  // namespace vcp
