#include "vcp/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "vcp/error.hpp"

namespace vcp {

double occupancy_probability(CellState state, double reliability) {
  switch (state) {
    case CellState::Occupied: return reliability;
    case CellState::Unoccupied: return 1.0 - reliability;
    case CellState::Unknown: return 0.5;
  }
  return 0.5;
}

double cell_value(double p, double age_s, double mu) { return std::abs(2.0 * p - 1.0) * std::pow(mu, age_s); }

double modified_interest(double w, double q) { return w * (1.0 - q); }

int sensing_window_side(const WorldConfig& config) {
  const double ratio = 2.0 * config.sensing_radius_m / config.cell_m;
  const long long side = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(side)) > 1e-9 || !is_power_of_two(side))
    throw ConfigError("2 * sensing radius / cell size must be a power of two");
  return static_cast<int>(side);
}

CellState SensedGrid::at_world(int ix, int iy) const {
  const int lx = ix - origin_ix, ly = iy - origin_iy;
  if (!states.contains(lx, ly)) return CellState::Unknown;
  return states.at(lx, ly);
}

namespace {

/// True when any cell strictly between the start and end cell of the segment
/// (grid traversal) is occupied and not part of the observer.
bool occluded(const World& world, const GroundTruth& truth, const VehicleState& self, Vec2 from, CellIndex target) {
  const double cell = world.config().cell_m;
  const Vec2 to = world.cell_center(target);
  CellIndex c = world.cell_of(from);
  const double dx = to.x - from.x, dy = to.y - from.y;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  const double t_dx = step_x != 0 ? cell / std::abs(dx) : inf;
  const double t_dy = step_y != 0 ? cell / std::abs(dy) : inf;
  double t_max_x = step_x > 0 ? ((c.ix + 1) * cell - from.x) / dx : (step_x < 0 ? (c.ix * cell - from.x) / dx : inf);
  double t_max_y = step_y > 0 ? ((c.iy + 1) * cell - from.y) / dy : (step_y < 0 ? (c.iy * cell - from.y) / dy : inf);
  const int max_steps = std::abs(target.ix - c.ix) + std::abs(target.iy - c.iy) + 2;
  for (int i = 0; i < max_steps; ++i) {
    if (c == target) return false;
    if (i > 0 && truth.contains(c.ix, c.iy) && truth.at(c.ix, c.iy) == CellState::Occupied &&
        !in_footprint(self, world.cell_center(c)) && !(c == world.cell_of(self.position))) {
      return true;
    }
    if (t_max_x < t_max_y) {
      c.ix += step_x;
      t_max_x += t_dx;
    } else {
      c.iy += step_y;
      t_max_y += t_dy;
    }
  }
  return false;
}

}  // namespace

SensedGrid sense(const World& world, const VehicleState& vehicle, const GroundTruth& truth, double now_s, Rng& rng) {
  const int side = sensing_window_side(world.config());
  const CellIndex centre = world.cell_of(vehicle.position);
  SensedGrid out;
  out.owner = vehicle.id;
  out.side = side;
  out.origin_ix = centre.ix - side / 2;
  out.origin_iy = centre.iy - side / 2;
  out.sensed_at = now_s;
  out.states = Grid2D<CellState>(side, side, CellState::Unknown);

  const double r = vehicle.sensing_radius_m;
  const bool noisy = vehicle.reliability < 1.0;
  std::bernoulli_distribution correct(vehicle.reliability);
  for (int ly = 0; ly < side; ++ly) {
    for (int lx = 0; lx < side; ++lx) {
      const int ix = out.origin_ix + lx, iy = out.origin_iy + ly;
      if (!truth.contains(ix, iy)) continue;
      const Vec2 c = world.cell_center(ix, iy);
      if (norm(c - vehicle.position) > r) continue;
      if (occluded(world, truth, vehicle, vehicle.position, {ix, iy})) continue;
      CellState s = truth.at(ix, iy);
      if (noisy && !correct(rng)) s = s == CellState::Occupied ? CellState::Unoccupied : CellState::Occupied;
      out.states.at(lx, ly) = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

PerceptionMap::PerceptionMap(int cells) : probability_(cells, cells, 0.5f), sensed_at_(cells, cells, 0.0) {}

double PerceptionMap::value(int ix, int iy, double now_s, double mu) const {
  return cell_value(probability_.at(ix, iy), now_s - sensed_at_.at(ix, iy), mu);
}

void PerceptionMap::integrate(const SensedGrid& sensed, double reliability) {
  const float p_occ = static_cast<float>(occupancy_probability(CellState::Occupied, reliability));
  const float p_free = static_cast<float>(occupancy_probability(CellState::Unoccupied, reliability));
  for (int ly = 0; ly < sensed.side; ++ly) {
    for (int lx = 0; lx < sensed.side; ++lx) {
      const CellState s = sensed.states.at(lx, ly);
      if (s == CellState::Unknown) continue;
      const int ix = sensed.origin_ix + lx, iy = sensed.origin_iy + ly;
      if (!probability_.contains(ix, iy)) continue;
      probability_.at(ix, iy) = s == CellState::Occupied ? p_occ : p_free;
      sensed_at_.at(ix, iy) = sensed.sensed_at;
    }
  }
}

bool PerceptionMap::adopt(int ix, int iy, double p, double gamma, double now_s, double mu) {
  if (!probability_.contains(ix, iy)) return false;
  if (cell_value(p, now_s - gamma, mu) <= value(ix, iy, now_s, mu)) return false;
  probability_.at(ix, iy) = static_cast<float>(p);
  sensed_at_.at(ix, iy) = gamma;
  return true;
}

void PerceptionMap::reset() {
  probability_.fill(0.5f);
  sensed_at_.fill(0.0);
}

// ---------------------------------------------------------------------------

InterestField::InterestField(int x0, int y0, Grid2D<double> values) : x0_(x0), y0_(y0), values_(std::move(values)) {
  build_integral();
}

void InterestField::build_integral() {
  const int w = values_.width(), h = values_.height();
  integral_ = Grid2D<double>(w + 1, h + 1, 0.0);
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += values_.at(x, y);
      integral_.at(x + 1, y + 1) = integral_.at(x + 1, y) + row;
    }
  }
}

InterestField InterestField::compute(const World& world, const VehicleState& receiver, const PerceptionMap& map,
                                     double now_s, const SensingParams& params) {
  const double diameter = receiver.speed * params.t_int_s;
  if (diameter <= 0.0) return InterestField(0, 0, Grid2D<double>(0, 0));
  const Vec2 dir{std::cos(receiver.heading), std::sin(receiver.heading)};
  const Vec2 mid = receiver.position + (diameter / 2.0) * dir;
  const double half = diameter / 2.0 + world.config().cell_m;
  const CellIndex lo = world.cell_of({mid.x - half, mid.y - half});
  const CellIndex hi = world.cell_of({mid.x + half, mid.y + half});
  Grid2D<double> values(hi.ix - lo.ix + 1, hi.iy - lo.iy + 1, 0.0);
  for (int iy = lo.iy; iy <= hi.iy; ++iy) {
    for (int ix = lo.ix; ix <= hi.ix; ++ix) {
      const double w = roi_weight(receiver, world.cell_center(ix, iy), params.t_int_s);
      if (w <= 0.0) continue;
      values.at(ix - lo.ix, iy - lo.iy) = modified_interest(w, map.value(ix, iy, now_s, params.mu));
    }
  }
  return InterestField(lo.ix, lo.iy, std::move(values));
}

double InterestField::at(int ix, int iy) const {
  const int lx = ix - x0_, ly = iy - y0_;
  return values_.contains(lx, ly) ? values_.at(lx, ly) : 0.0;
}

double InterestField::block_sum(int ix0, int iy0, int side) const {
  const int w = values_.width(), h = values_.height();
  const int xa = std::clamp(ix0 - x0_, 0, w), xb = std::clamp(ix0 + side - x0_, 0, w);
  const int ya = std::clamp(iy0 - y0_, 0, h), yb = std::clamp(iy0 + side - y0_, 0, h);
  if (xa >= xb || ya >= yb) return 0.0;
  return integral_.at(xb, yb) - integral_.at(xa, yb) - integral_.at(xb, ya) + integral_.at(xa, ya);
}

InterestField InterestField::scaled(double c) const {
  Grid2D<double> v = values_;
  for (auto& x : v.data()) x *= c;
  return InterestField(x0_, y0_, std::move(v));
}

}  // namespace vcp
