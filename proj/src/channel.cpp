#include "vcp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vcp/error.hpp"

namespace vcp {

const char* to_string(LosClass c) {
  switch (c) {
    case LosClass::Los: return "LOS";
    case LosClass::Wlos: return "WLOS";
    case LosClass::Nlos: return "NLOS";
  }
  return "?";
}

double NetConfig::tx_power_w() const { return std::pow(10.0, tx_power_dbm / 10.0) * 1e-3; }
double NetConfig::noise_density_w_hz() const { return std::pow(10.0, noise_density_dbm_hz / 10.0) * 1e-3; }

void validate(const NetConfig& c) {
  if (c.rb_count < 2) throw ConfigError("at least two resource blocks are required");
  if (!(c.rb_bandwidth_hz > 0.0)) throw ConfigError("RB bandwidth must be positive");
  if (c.block_bits <= 0) throw ConfigError("block size must be positive");
  if (!(c.slot_s > 0.0)) throw ConfigError("slot duration must be positive");
  if (!(c.channel.min_distance_m > 0.0)) throw ConfigError("minimum link distance must be positive");
}

int Association::partner(int a) const {
  for (int b = 0; b < n_; ++b)
    if (at(a, b) == 1) return b;
  return -1;
}

int RbAllocation::rb_of(int a) const {
  for (int b = 0; b < n_; ++b)
    for (int k = 0; k < k_; ++k)
      if (at(a, b, k) == 1) return k;
  return -1;
}

namespace {

enum class Arm { Box, EastWest, NorthSouth, Off };

Arm arm_of(Vec2 p, const WorldConfig& w) {
  const Vec2 c = w.center();
  const bool on_ew = std::abs(p.y - c.y) <= w.junction.ew_road_width_m / 2.0;
  const bool on_ns = std::abs(p.x - c.x) <= w.junction.ns_road_width_m / 2.0;
  if (on_ew && on_ns) return Arm::Box;
  if (on_ew) return Arm::EastWest;
  if (on_ns) return Arm::NorthSouth;
  return Arm::Off;
}

}  // namespace

LosClass classify_los(Vec2 a, Vec2 b, const WorldConfig& world) {
  for (const auto& r : buildings(world))
    if (segment_intersects(r, a, b)) return LosClass::Nlos;
  const Arm x = arm_of(a, world), y = arm_of(b, world);
  if ((x == Arm::EastWest && y == Arm::NorthSouth) || (x == Arm::NorthSouth && y == Arm::EastWest))
    return LosClass::Wlos;
  return LosClass::Los;
}

double corner_distance(Vec2 a, Vec2 b, const WorldConfig& world) {
  const Vec2 c = world.center();
  return std::min(norm(a - c), norm(b - c));
}

double pathloss_db(LosClass cls, double distance_m, double corner_distance_m, const ChannelParams& p) {
  const double d = std::max(distance_m, p.min_distance_m);
  double pl = p.los_intercept_db + p.los_slope_db * std::log10(d);
  if (cls == LosClass::Wlos) pl += p.wlos_extra_db;
  if (cls == LosClass::Nlos) pl += p.nlos_extra_db + p.nlos_corner_db_per_m * corner_distance_m;
  return pl;
}

double link_gain(LosClass cls, double distance_m, double corner_distance_m, const ChannelParams& params, Rng& rng) {
  const double h = std::pow(10.0, -pathloss_db(cls, distance_m, corner_distance_m, params) / 10.0);
  if (!params.fading) return h;
  std::exponential_distribution<double> fade(1.0);
  return h * fade(rng);
}

GainTensor compute_gains(const std::vector<Vec2>& positions, const std::vector<bool>& present, int rb_count,
                         const WorldConfig& world, const ChannelParams& params, Rng& rng) {
  const int n = static_cast<int>(positions.size());
  GainTensor g(n, rb_count, 0.0);
  for (int a = 0; a < n; ++a) {
    if (!present[static_cast<std::size_t>(a)]) continue;
    for (int b = 0; b < n; ++b) {
      if (a == b || !present[static_cast<std::size_t>(b)]) continue;
      const Vec2 pa = positions[static_cast<std::size_t>(a)], pb = positions[static_cast<std::size_t>(b)];
      const LosClass cls = classify_los(pa, pb, world);
      const double d = norm(pa - pb), dc = corner_distance(pa, pb, world);
      for (int k = 0; k < rb_count; ++k) g.at(a, b, k) = link_gain(cls, d, dc, params, rng);
    }
  }
  return g;
}

void validate_allocation(const Association& e, const RbAllocation& eta) {
  const int n = e.size();
  if (eta.vehicles() != n) throw DimensionError("association and allocation sizes differ");
  for (int a = 0; a < n; ++a) {
    int assoc = 0, rbs = 0;
    for (int b = 0; b < n; ++b) {
      const int v = e.at(a, b);
      if (v != 0 && v != 1) throw ConstraintViolation("binary: association entries must be 0 or 1");
      if (v != e.at(b, a)) throw ConstraintViolation("symmetric: association must be symmetric");
      assoc += v;
      for (int k = 0; k < eta.rbs(); ++k) {
        const int x = eta.at(a, b, k);
        if (x != 0 && x != 1) throw ConstraintViolation("binary: allocation entries must be 0 or 1");
        if (x == 1 && v == 0) throw ConstraintViolation("unassociated_rb: RB allocated to an unassociated link");
        rbs += x;
        if (x == 1 && eta.at(b, a, k) == 1) throw ConstraintViolation("orthogonal: intra-pair RBs must differ");
      }
    }
    if (e.at(a, a) != 0) throw ConstraintViolation("single_association: a vehicle cannot associate with itself");
    if (assoc > 1) throw ConstraintViolation("single_association: vehicle associated with more than one peer");
    if (rbs > 1) throw ConstraintViolation("single_rb: transmitter allocated more than one RB");
  }
}

double interference_w(const RbAllocation& eta, const GainTensor& gains, int tx, int rx, int k, const NetConfig& config) {
  const int n = eta.vehicles();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == tx || i == rx) continue;
    for (int j = 0; j < n; ++j) {
      if (eta.at(i, j, k) == 1) sum += config.tx_power_w() * gains.at(i, rx, k);
    }
  }
  return sum;
}

std::vector<std::vector<double>> compute_rates(const Association& e, const RbAllocation& eta, const GainTensor& gains,
                                              const NetConfig& config) {
  validate_allocation(e, eta);
  const int n = e.size();
  if (gains.vehicles() != n || gains.rbs() != eta.rbs()) throw DimensionError("gain tensor shape mismatch");
  const double p = config.tx_power_w();
  const double noise = config.noise_density_w_hz() * config.rb_bandwidth_hz;
  const double scale = config.slot_s / config.block_bits;
  std::vector<std::vector<double>> rate(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (e.at(a, b) == 0) continue;
      double r = 0.0;
      for (int k = 0; k < eta.rbs(); ++k) {
        if (eta.at(a, b, k) == 0) continue;
        const double sinr = p * gains.at(a, b, k) / (noise + interference_w(eta, gains, a, b, k, config));
        r += config.rb_bandwidth_hz * std::log2(1.0 + sinr);
      }
      rate[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = scale * r;
    }
  }
  return rate;
}

int RateCredit::budget(int tx, int rx, double rate) {
  auto& res = residue_[static_cast<std::size_t>(tx * n_ + rx)];
  const double credit = res + std::max(rate, 0.0);
  const double whole = std::floor(credit);
  res = credit - whole;
  return static_cast<int>(whole);
}

}  // namespace vcp
