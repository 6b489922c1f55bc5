#pragma once

#include "vcp/common.hpp"
#include "vcp/world.hpp"

namespace vcp {

struct SensingParams {
  double mu = 0.9;       // AoI decay base per second
  double t_int_s = 2.0;  // look-ahead horizon of the region of interest
};

/// Posterior occupancy given a sensor reading with reliability lambda in (0.5, 1].
double occupancy_probability(CellState state, double reliability);

/// Worth of information: |2p - 1| * mu^age.
double cell_value(double p, double age_s, double mu);

/// Interest weighted by the lack of worthy own information: w * (1 - q).
double modified_interest(double w, double q);

/// Side of the square sensing window in world cells (2r / cell).
int sensing_window_side(const WorldConfig& config);

/// One vehicle's three-state sensor output over its 2r x 2r window.
struct SensedGrid {
  int owner = -1;
  int origin_ix = 0;  // world cell of the window's low corner; may lie outside the world
  int origin_iy = 0;
  int side = 0;
  double sensed_at = 0.0;  // last-sensed time of every non-unknown cell
  Grid2D<CellState> states;

  /// Unknown outside the window.
  CellState at_world(int ix, int iy) const;
};

/// Cells beyond the sensing radius, outside the world, or shadowed by an occupied
/// cell on the ray from the vehicle center are unknown. Visible cells report the
/// ground truth with probability lambda and the flipped state otherwise.
/// The vehicle's own footprint never occludes.
SensedGrid sense(const World& world, const VehicleState& vehicle, const GroundTruth& truth, double now_s, Rng& rng);

/// A vehicle's fused world map: per-cell occupancy probability and last-sensed time.
class PerceptionMap {
 public:
  PerceptionMap() = default;
  explicit PerceptionMap(int cells);

  int cells() const { return probability_.width(); }
  double probability(int ix, int iy) const { return probability_.at(ix, iy); }
  double sensed_at(int ix, int iy) const { return sensed_at_.at(ix, iy); }
  double value(int ix, int iy, double now_s, double mu) const;

  /// Overwrites every sensed (non-unknown) cell with the new reading.
  void integrate(const SensedGrid& sensed, double reliability);

  /// Takes (p, gamma) only when its worth exceeds the stored worth. Returns whether it did.
  bool adopt(int ix, int iy, double p, double gamma, double now_s, double mu);

  void reset();

 private:
  Grid2D<float> probability_;
  Grid2D<double> sensed_at_;
};

/// Modified interest i_n(x) of one receiver, stored over the bounding box of its
/// region of interest with an integral image for O(1) block sums.
class InterestField {
 public:
  InterestField() = default;
  /// Explicit field: `values` covers world cells [x0, x0 + w) x [y0, y0 + h).
  InterestField(int x0, int y0, Grid2D<double> values);

  static InterestField compute(const World& world, const VehicleState& receiver, const PerceptionMap& map,
                               double now_s, const SensingParams& params);

  double at(int ix, int iy) const;
  /// Sum of i over world cells [ix0, ix0 + side) x [iy0, iy0 + side).
  double block_sum(int ix0, int iy0, int side) const;
  double total() const { return block_sum(x0_, y0_, std::max(values_.width(), values_.height())); }
  /// Multiplies every cell by c.
  InterestField scaled(double c) const;

 private:
  void build_integral();

  int x0_ = 0;
  int y0_ = 0;
  Grid2D<double> values_;
  Grid2D<double> integral_;  // (w + 1) x (h + 1)
};

}  // namespace vcp
