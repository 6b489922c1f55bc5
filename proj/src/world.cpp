#include "vcp/world.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "vcp/error.hpp"

namespace vcp {

int WorldConfig::cells() const { return static_cast<int>(std::lround(extent_m / cell_m)); }

void validate(const WorldConfig& c) {
  if (!(c.extent_m > 0.0) || !(c.cell_m > 0.0)) throw ConfigError("world extent and cell size must be positive");
  double ratio = c.extent_m / c.cell_m;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || !is_power_of_two(std::llround(ratio)))
    throw ConfigError("extent_m / cell_m must be a power of two");
  if (!(c.slot_s > 0.0)) throw ConfigError("slot_s must be positive");
  if (c.n_max < 2) throw ConfigError("n_max must be at least 2");
  if (!(c.sensing_radius_m > 0.0)) throw ConfigError("sensing radius must be positive");
  if (!(c.reliability > 0.5 && c.reliability <= 1.0)) throw ConfigError("reliability must lie in (0.5, 1]");
  const auto& j = c.junction;
  if (!(j.ew_road_width_m > 0.0) || !(j.ns_road_width_m > 0.0)) throw ConfigError("road widths must be positive");
  if (j.lane_offset_m <= 0.0 || j.lane_offset_m >= std::min(j.ew_road_width_m, j.ns_road_width_m) / 2.0)
    throw ConfigError("lane offset must lie inside the road");
  if (j.stop_line_offset_m <= 0.0 || j.stop_line_offset_m >= c.extent_m / 2.0)
    throw ConfigError("stop line must lie inside the world");
  if (c.signal.green_s <= 0.0 || c.signal.yellow_s < 0.0 || c.signal.all_red_s < 0.0)
    throw ConfigError("invalid signal plan");
  const auto& m = c.motion;
  if (m.accel_mps2 <= 0.0 || m.decel_mps2 <= 0.0 || m.speed_min_mps <= 0.0 || m.speed_max_mps < m.speed_min_mps)
    throw ConfigError("invalid motion parameters");
  if (!(c.speed_cap_mps > 0.0)) throw ConfigError("speed_cap_mps must be positive");
}

std::array<Rect, 4> buildings(const WorldConfig& c) {
  const Vec2 ctr = c.center();
  const double bx = c.junction.ns_road_width_m / 2.0 + c.junction.building_setback_m;
  const double by = c.junction.ew_road_width_m / 2.0 + c.junction.building_setback_m;
  const double e = c.extent_m;
  return {Rect{0.0, 0.0, ctr.x - bx, ctr.y - by}, Rect{ctr.x + bx, 0.0, e, ctr.y - by},
          Rect{0.0, ctr.y + by, ctr.x - bx, e}, Rect{ctr.x + bx, ctr.y + by, e, e}};
}

bool segment_intersects(const Rect& r, Vec2 a, Vec2 b) {
  // Liang-Barsky clipping; touching the boundary only does not count.
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x0, r.x1 - a.x, a.y - r.y0, r.y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] <= 0.0) return false;
      continue;
    }
    double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 >= t1) return false;
  }
  return t1 - t0 > 1e-12;
}

Lane lane_for(Approach a, const WorldConfig& c) {
  const Vec2 ctr = c.center();
  const double off = c.junction.lane_offset_m;
  switch (a) {
    case Approach::Eastbound: return {{0.0, ctr.y - off}, {1.0, 0.0}, 0.0};
    case Approach::Westbound: return {{c.extent_m, ctr.y + off}, {-1.0, 0.0}, std::numbers::pi};
    case Approach::Northbound: return {{ctr.x + off, 0.0}, {0.0, 1.0}, std::numbers::pi / 2.0};
    case Approach::Southbound: return {{ctr.x - off, c.extent_m}, {0.0, -1.0}, -std::numbers::pi / 2.0};
  }
  return {};
}

double stop_line_position(const WorldConfig& c) { return c.extent_m / 2.0 - c.junction.stop_line_offset_m; }

SignalPhase signal_phase(Approach a, double time_s, const SignalPlan& plan) {
  const double half = plan.green_s + plan.yellow_s + plan.all_red_s;
  double t = std::fmod(time_s, plan.cycle_s());
  const bool ew = a == Approach::Eastbound || a == Approach::Westbound;
  if (!ew) t = std::fmod(t + half, plan.cycle_s());
  if (t < plan.green_s) return SignalPhase::Green;
  if (t < plan.green_s + plan.yellow_s) return SignalPhase::Yellow;
  return SignalPhase::Red;
}

bool in_footprint(const VehicleState& v, Vec2 p) {
  const Vec2 rel = p - v.position;
  const Vec2 dir{std::cos(v.heading), std::sin(v.heading)};
  const Vec2 perp{-dir.y, dir.x};
  return std::abs(dot(rel, dir)) <= v.length_m / 2.0 && std::abs(dot(rel, perp)) <= v.width_m / 2.0;
}

double roi_weight(const VehicleState& vehicle, Vec2 x, double t_int_s) {
  if (vehicle.speed <= 0.0 || t_int_s <= 0.0) return 0.0;
  const Vec2 rel = x - vehicle.position;
  const double d = norm(rel);
  if (d == 0.0) return 1.0;
  const Vec2 dir{std::cos(vehicle.heading), std::sin(vehicle.heading)};
  const double reach = vehicle.speed * t_int_s * (dot(dir, rel) / d);
  if (reach <= 0.0 || d > reach) return 0.0;
  return (reach - d) / reach;
}

// ---------------------------------------------------------------------------
// MobilityTrace

MobilityTrace::MobilityTrace(int slot_count, std::vector<VehicleInfo> vehicles, std::vector<TraceSample> samples)
    : slot_count_(slot_count), vehicles_(std::move(vehicles)), samples_(std::move(samples)) {
  std::sort(vehicles_.begin(), vehicles_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  slot_begin_.assign(static_cast<std::size_t>(slot_count_) + 1, 0);
  presence_.assign(vehicles_.size(), {-1, -1});
  std::size_t i = 0;
  for (int s = 0; s < slot_count_; ++s) {
    slot_begin_[static_cast<std::size_t>(s)] = i;
    while (i < samples_.size() && samples_[i].slot == s) {
      if (i > 0 && samples_[i - 1].slot == s && samples_[i - 1].id >= samples_[i].id)
        throw Error("trace samples must be sorted by (slot, id)");
      auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), samples_[i].id,
                                 [](const VehicleInfo& v, int id) { return v.id < id; });
      if (it == vehicles_.end() || it->id != samples_[i].id) throw Error("trace sample for unknown vehicle");
      auto& pr = presence_[static_cast<std::size_t>(it - vehicles_.begin())];
      if (pr.first < 0) pr.first = s;
      pr.second = s;
      ++i;
    }
  }
  if (i != samples_.size()) throw Error("trace samples out of slot range or unsorted");
  slot_begin_[static_cast<std::size_t>(slot_count_)] = i;
}

std::span<const TraceSample> MobilityTrace::at(int slot) const {
  if (slot < 0 || slot >= slot_count_) throw RangeError("slot outside trace");
  const auto b = slot_begin_[static_cast<std::size_t>(slot)];
  const auto e = slot_begin_[static_cast<std::size_t>(slot) + 1];
  return {samples_.data() + b, e - b};
}

const TraceSample* MobilityTrace::find(int slot, int id) const {
  auto s = at(slot);
  auto it = std::lower_bound(s.begin(), s.end(), id, [](const TraceSample& t, int v) { return t.id < v; });
  return (it != s.end() && it->id == id) ? &*it : nullptr;
}

const VehicleInfo* MobilityTrace::info(int id) const {
  auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), id,
                             [](const VehicleInfo& v, int x) { return v.id < x; });
  return (it != vehicles_.end() && it->id == id) ? &*it : nullptr;
}

std::pair<int, int> MobilityTrace::presence(int id) const {
  auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), id,
                             [](const VehicleInfo& v, int x) { return v.id < x; });
  if (it == vehicles_.end() || it->id != id) return {-1, -1};
  return presence_[static_cast<std::size_t>(it - vehicles_.begin())];
}

void MobilityTrace::write_csv(std::ostream& out) const {
  out << "slot,id,x,y,v,heading\n";
  std::ostringstream line;
  line << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : samples_) {
    line.str("");
    line << s.slot << ',' << s.id << ',' << s.x << ',' << s.y << ',' << s.v << ',' << s.heading << '\n';
    out << line.str();
  }
}

MobilityTrace MobilityTrace::read_csv(std::istream& in, const WorldConfig& config) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace CSV");
  if (line.rfind("slot,id,x,y,v,heading", 0) != 0) throw IoError("unexpected trace CSV header: " + line);
  std::vector<TraceSample> samples;
  std::vector<VehicleInfo> infos;
  int max_slot = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TraceSample s;
    char c1, c2, c3, c4, c5;
    if (!(ls >> s.slot >> c1 >> s.id >> c2 >> s.x >> c3 >> s.y >> c4 >> s.v >> c5 >> s.heading))
      throw IoError("malformed trace CSV line: " + line);
    samples.push_back(s);
    max_slot = std::max(max_slot, s.slot);
    if (std::none_of(infos.begin(), infos.end(), [&](const VehicleInfo& v) { return v.id == s.id; })) {
      VehicleInfo vi;
      vi.id = s.id;
      vi.reliability = config.reliability;
      vi.entry_slot = s.slot;
      vi.target_speed_mps = s.v;
      infos.push_back(vi);
    }
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.slot != b.slot ? a.slot < b.slot : a.id < b.id; });
  return MobilityTrace(max_slot + 1, std::move(infos), std::move(samples));
}

// ---------------------------------------------------------------------------
// Mobility generator

namespace {

struct MovingVehicle {
  int info_index = 0;
  double s = 0.0;  // arc length of the vehicle center along its lane
  double v = 0.0;
  bool committed = false;  // proceeds through yellow/red
};

}  // namespace

MobilityTrace generate_trace(const WorldConfig& config, int n_vehicles, std::uint64_t seed, int slots) {
  validate(config);
  if (n_vehicles < 2) throw ConfigError("a trace needs at least two vehicles");
  if (slots < 1) throw ConfigError("trace must span at least one slot");

  Rng rng = make_stream(seed, 0x7472616365ULL);
  std::uniform_int_distribution<int> approach_dist(0, 3);
  std::uniform_real_distribution<double> speed_dist(config.motion.speed_min_mps, config.motion.speed_max_mps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int entry_span = std::max(1, static_cast<int>(0.8 * slots));
  std::uniform_int_distribution<int> entry_dist(0, entry_span - 1);

  std::vector<VehicleInfo> infos(static_cast<std::size_t>(n_vehicles));
  for (int i = 0; i < n_vehicles; ++i) {
    auto& vi = infos[static_cast<std::size_t>(i)];
    vi.id = i;
    vi.approach = static_cast<Approach>(approach_dist(rng));
    vi.entry_slot = entry_dist(rng);
    vi.target_speed_mps = speed_dist(rng);
    const double kind = unit(rng);
    if (kind < 0.7) {
      vi.length_m = 4.5, vi.width_m = 1.8;  // car
    } else if (kind < 0.85) {
      vi.length_m = 9.0, vi.width_m = 2.4;  // truck
    } else {
      vi.length_m = 12.0, vi.width_m = 2.5;  // bus
    }
    vi.reliability = config.reliability;
  }

  std::vector<int> pending(static_cast<std::size_t>(n_vehicles));
  for (int i = 0; i < n_vehicles; ++i) pending[static_cast<std::size_t>(i)] = i;
  std::stable_sort(pending.begin(), pending.end(), [&](int a, int b) {
    return infos[static_cast<std::size_t>(a)].entry_slot < infos[static_cast<std::size_t>(b)].entry_slot;
  });
  std::size_t next_pending = 0;
  std::vector<int> waiting;  // entry due but lane mouth blocked

  const auto& m = config.motion;
  const double dt = config.slot_s;
  const double stop_s = stop_line_position(config);
  std::vector<MovingVehicle> active;
  std::vector<TraceSample> samples;
  std::array<SignalPhase, 4> prev_phase{};
  for (int a = 0; a < 4; ++a) prev_phase[static_cast<std::size_t>(a)] = signal_phase(static_cast<Approach>(a), 0.0, config.signal);

  auto info_of = [&](const MovingVehicle& mv) -> const VehicleInfo& { return infos[static_cast<std::size_t>(mv.info_index)]; };

  for (int t = 0; t < slots; ++t) {
    while (next_pending < pending.size() && infos[static_cast<std::size_t>(pending[next_pending])].entry_slot <= t)
      waiting.push_back(pending[next_pending++]);

    // Spawn when the lane mouth is clear.
    for (auto it = waiting.begin(); it != waiting.end();) {
      const auto& vi = infos[static_cast<std::size_t>(*it)];
      double nearest_rear = std::numeric_limits<double>::infinity();
      double nearest_speed = 0.0;
      for (const auto& o : active) {
        if (info_of(o).approach != vi.approach) continue;
        const double rear = o.s - info_of(o).length_m / 2.0;
        if (rear < nearest_rear) nearest_rear = rear, nearest_speed = o.v;
      }
      if (nearest_rear >= vi.length_m + m.spawn_gap_m) {
        MovingVehicle mv;
        mv.info_index = *it;
        mv.s = vi.length_m / 2.0 + 1e-3;
        const double gap = nearest_rear - m.min_gap_m - vi.length_m;
        mv.v = std::isinf(nearest_rear) ? vi.target_speed_mps
                                        : std::min(vi.target_speed_mps,
                                                   std::sqrt(2.0 * m.decel_mps2 * std::max(gap, 0.0) +
                                                             nearest_speed * nearest_speed));
        active.push_back(mv);
        it = waiting.erase(it);
      } else {
        ++it;
      }
    }

    std::sort(active.begin(), active.end(), [&](const MovingVehicle& a, const MovingVehicle& b) {
      return info_of(a).id < info_of(b).id;
    });
    for (const auto& mv : active) {
      const auto& vi = info_of(mv);
      const Lane lane = lane_for(vi.approach, config);
      const Vec2 p = lane.start + mv.s * lane.direction;
      samples.push_back({t, vi.id, p.x, p.y, mv.v, lane.heading});
    }

    // Advance to t + 1. Leaders (larger s) first within a lane.
    std::array<SignalPhase, 4> phase{};
    for (int a = 0; a < 4; ++a) phase[static_cast<std::size_t>(a)] = signal_phase(static_cast<Approach>(a), t * dt, config.signal);
    std::sort(active.begin(), active.end(), [&](const MovingVehicle& a, const MovingVehicle& b) {
      if (info_of(a).approach != info_of(b).approach) return info_of(a).approach < info_of(b).approach;
      return a.s > b.s;
    });
    for (std::size_t i = 0; i < active.size(); ++i) {
      auto& mv = active[i];
      const auto& vi = info_of(mv);
      const auto ai = static_cast<std::size_t>(vi.approach);
      const double front = mv.s + vi.length_m / 2.0;
      const bool before_line = front <= stop_s;
      if (!before_line || phase[ai] == SignalPhase::Green) mv.committed = false;
      if (before_line && phase[ai] == SignalPhase::Yellow && prev_phase[ai] == SignalPhase::Green) {
        // Dilemma-zone rule, evaluated once at yellow onset.
        mv.committed = (stop_s - front) < mv.v * mv.v / (2.0 * m.decel_mps2);
      }
      const bool must_stop = before_line && phase[ai] != SignalPhase::Green && !mv.committed;

      double v_new = std::min(mv.v + m.accel_mps2 * dt, vi.target_speed_mps);
      double s_limit = std::numeric_limits<double>::infinity();
      if (must_stop) {
        const double gap = std::max(stop_s - front, 0.0);
        v_new = std::min(v_new, std::sqrt(2.0 * m.decel_mps2 * gap));
        s_limit = stop_s - vi.length_m / 2.0;
      }
      if (i > 0 && info_of(active[i - 1]).approach == vi.approach) {
        const auto& lead = active[i - 1];
        const double lead_rear = lead.s - info_of(lead).length_m / 2.0;
        const double gap = lead_rear - m.min_gap_m - front;
        v_new = std::min(v_new, std::sqrt(2.0 * m.decel_mps2 * std::max(gap, 0.0) + lead.v * lead.v));
        s_limit = std::min(s_limit, lead_rear - m.min_gap_m - vi.length_m / 2.0);
      }
      v_new = std::max(v_new, 0.0);
      double s_new = mv.s + v_new * dt;
      if (s_new >= s_limit) {
        s_new = std::max(mv.s, s_limit);
        v_new = (s_new - mv.s) / dt;
      }
      mv.s = s_new;
      mv.v = v_new;
    }
    prev_phase = phase;

    // Exit once the footprint would leave the world.
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](const MovingVehicle& mv) {
                                  return mv.s + info_of(mv).length_m / 2.0 >= config.extent_m - 1e-3;
                                }),
                 active.end());
  }

  return MobilityTrace(slots, std::move(infos), std::move(samples));
}

// ---------------------------------------------------------------------------
// World

World::World(WorldConfig config) : config_(std::move(config)) {
  validate(config_);
  cells_ = config_.cells();
  static_map_ = GroundTruth(cells_, cells_, CellState::Unoccupied);
  const auto blds = buildings(config_);
  for (int iy = 0; iy < cells_; ++iy) {
    for (int ix = 0; ix < cells_; ++ix) {
      const Vec2 c = cell_center(ix, iy);
      for (const auto& b : blds) {
        if (c.x > b.x0 && c.x < b.x1 && c.y > b.y0 && c.y < b.y1) {
          static_map_.at(ix, iy) = CellState::Occupied;
          break;
        }
      }
    }
  }
}

CellIndex World::cell_of(Vec2 p) const {
  auto clampi = [&](double v) {
    return std::clamp(static_cast<int>(std::floor(v / config_.cell_m)), 0, cells_ - 1);
  };
  return {clampi(p.x), clampi(p.y)};
}

Vec2 World::cell_center(CellIndex c) const {
  return {(c.ix + 0.5) * config_.cell_m, (c.iy + 0.5) * config_.cell_m};
}

VehicleState World::vehicle_state(const MobilityTrace& trace, const TraceSample& s) const {
  VehicleState v;
  v.id = s.id;
  v.position = {s.x, s.y};
  v.speed = s.v;
  v.heading = s.heading;
  v.sensing_radius_m = config_.sensing_radius_m;
  if (const auto* info = trace.info(s.id)) {
    v.length_m = info->length_m;
    v.width_m = info->width_m;
    v.reliability = info->reliability;
  } else {
    v.reliability = config_.reliability;
  }
  return v;
}

std::vector<VehicleState> World::vehicles_at(const MobilityTrace& trace, int slot) const {
  std::vector<VehicleState> out;
  for (const auto& s : trace.at(slot)) out.push_back(vehicle_state(trace, s));
  return out;
}

std::vector<CellIndex> World::footprint_cells(const VehicleState& v) const {
  std::vector<CellIndex> out;
  const double reach = 0.5 * std::hypot(v.length_m, v.width_m);
  const CellIndex lo = cell_of({v.position.x - reach, v.position.y - reach});
  const CellIndex hi = cell_of({v.position.x + reach, v.position.y + reach});
  const CellIndex self = cell_of(v.position);
  for (int iy = lo.iy; iy <= hi.iy; ++iy) {
    for (int ix = lo.ix; ix <= hi.ix; ++ix) {
      if ((ix == self.ix && iy == self.iy) || in_footprint(v, cell_center(ix, iy))) out.push_back({ix, iy});
    }
  }
  return out;
}

GroundTruth World::step_world(const MobilityTrace& trace, int slot) const {
  GroundTruth g = static_map_;
  for (const auto& s : trace.at(slot)) {
    for (const auto& c : footprint_cells(vehicle_state(trace, s))) g.at(c.ix, c.iy) = CellState::Occupied;
  }
  return g;
}

}  // namespace vcp
