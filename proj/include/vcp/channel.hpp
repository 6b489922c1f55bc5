#pragma once

#include <cstdint>
#include <vector>

#include "vcp/common.hpp"
#include "vcp/world.hpp"

namespace vcp {

enum class LosClass : std::uint8_t { Los = 0, Wlos = 1, Nlos = 2 };
const char* to_string(LosClass c);

/// Parametric three-class V2V path loss, in dB.
struct ChannelParams {
  double los_intercept_db = 38.77;
  double los_slope_db = 16.7;  // per decade of distance
  double wlos_extra_db = 5.0;
  double nlos_extra_db = 15.0;
  double nlos_corner_db_per_m = 0.4;
  double min_distance_m = 1.0;
  bool fading = true;  // Rayleigh block fading (unit-mean exponential power)
};

struct NetConfig {
  int rb_count = 10;                  // K
  double rb_bandwidth_hz = 180e3;     // omega
  double tx_power_dbm = 10.0;         // P per RB
  double noise_density_dbm_hz = -174.0;  // N0
  double carrier_hz = 5.9e9;
  int block_bits = 800;               // M (100 bytes)
  double slot_s = 0.002;              // tau
  ChannelParams channel;

  double tx_power_w() const;
  double noise_density_w_hz() const;
};

void validate(const NetConfig& config);

/// N x N association matrix e_nn' (entries are meant to be 0/1).
class Association {
 public:
  Association() = default;
  explicit Association(int n) : n_(n), e_(static_cast<std::size_t>(n * n), 0) {}
  int size() const { return n_; }
  int& at(int a, int b) { return e_[static_cast<std::size_t>(a * n_ + b)]; }
  int at(int a, int b) const { return e_[static_cast<std::size_t>(a * n_ + b)]; }
  /// Sets e_ab = e_ba = 1.
  void pair(int a, int b) { at(a, b) = at(b, a) = 1; }
  /// First n' with e_nn' = 1, or -1.
  int partner(int a) const;
  friend bool operator==(const Association&, const Association&) = default;

 private:
  int n_ = 0;
  std::vector<int> e_;
};

/// N x N x K allocation eta_nn'^k.
class RbAllocation {
 public:
  RbAllocation() = default;
  RbAllocation(int n, int k) : n_(n), k_(k), eta_(static_cast<std::size_t>(n * n * k), 0) {}
  int vehicles() const { return n_; }
  int rbs() const { return k_; }
  int& at(int a, int b, int k) { return eta_[static_cast<std::size_t>((a * n_ + b) * k_ + k)]; }
  int at(int a, int b, int k) const { return eta_[static_cast<std::size_t>((a * n_ + b) * k_ + k)]; }
  /// RB used by transmitter a (first match), or -1.
  int rb_of(int a) const;
  friend bool operator==(const RbAllocation&, const RbAllocation&) = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> eta_;
};

/// Instantaneous linear gains h_nn'^k.
class GainTensor {
 public:
  GainTensor() = default;
  GainTensor(int n, int k, double fill = 0.0) : n_(n), k_(k), h_(static_cast<std::size_t>(n * n * k), fill) {}
  int vehicles() const { return n_; }
  int rbs() const { return k_; }
  double& at(int a, int b, int k) { return h_[static_cast<std::size_t>((a * n_ + b) * k_ + k)]; }
  double at(int a, int b, int k) const { return h_[static_cast<std::size_t>((a * n_ + b) * k_ + k)]; }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<double> h_;
};

/// LOS unless the segment crosses a corner building (NLOS); vehicles on
/// perpendicular arms with a clear diagonal through the junction are WLOS.
LosClass classify_los(Vec2 a, Vec2 b, const WorldConfig& world);

/// Distance from the nearer endpoint to the junction center (NLOS corner term).
double corner_distance(Vec2 a, Vec2 b, const WorldConfig& world);

double pathloss_db(LosClass cls, double distance_m, double corner_distance_m, const ChannelParams& params);

/// Path loss times unit-mean exponential fading (when enabled). d below the
/// minimum distance is clamped.
double link_gain(LosClass cls, double distance_m, double corner_distance_m, const ChannelParams& params, Rng& rng);

/// Gains for every ordered pair of the given positions on every RB. Absent
/// entries (nullopt-like via `present`) get zero gain.
GainTensor compute_gains(const std::vector<Vec2>& positions, const std::vector<bool>& present, int rb_count,
                         const WorldConfig& world, const ChannelParams& params, Rng& rng);

/// Co-channel interference at receiver `rx` on RB k from every transmitter
/// other than `tx` and `rx`.
double interference_w(const RbAllocation& eta, const GainTensor& gains, int tx, int rx, int k, const NetConfig& config);

/// R_nn' in blocks per slot (real-valued). Throws ConstraintViolation naming the
/// violated constraint when the allocation is invalid.
std::vector<std::vector<double>> compute_rates(const Association& e, const RbAllocation& eta, const GainTensor& gains,
                                              const NetConfig& config);

/// Throws ConstraintViolation if (e, eta) break the structural constraints.
void validate_allocation(const Association& e, const RbAllocation& eta);

/// Per-link integerization of rates: credit accumulates the fractional
/// residue within a frame; each slot delivers floor(credit) blocks at most.
class RateCredit {
 public:
  RateCredit() = default;
  explicit RateCredit(int n) : n_(n), residue_(static_cast<std::size_t>(n * n), 0.0) {}
  void reset() { std::fill(residue_.begin(), residue_.end(), 0.0); }
  /// Adds this slot's rate and returns the deliverable block count.
  int budget(int tx, int rx, double rate);

 private:
  int n_ = 0;
  std::vector<double> residue_;
};

}  // namespace vcp
