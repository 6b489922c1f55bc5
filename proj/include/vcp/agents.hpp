#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vcp/channel.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/world.hpp"

namespace vcp {

/// j_i = N - 2i + 1 for i = 1..floor(N/2).
std::vector<int> pairing_branch_sizes(int n);

/// Number of perfect (or near-perfect, odd N) matchings: prod (N - 2i + 1).
long long pairing_count(int n);

/// Sub-actions are 0-based: value k pairs the lowest-indexed unpaired vehicle
/// with the (k+1)-th lowest-indexed remaining vehicle. Odd N leaves the last
/// remaining vehicle unpaired.
Association decode_pairing(std::span<const int> sub_actions, int n);

/// Pairs of an association ordered by their lower index.
std::vector<std::pair<int, int>> pairs_of(const Association& e);

/// All {k1 < k2} RB pairs in lexicographic order.
std::vector<std::pair<int, int>> rb_combinations(int k);

/// Pair i (ordered by lower member) takes combination sub_actions[i]; the lower
/// RB goes to the lower-indexed vehicle.
RbAllocation decode_rb(std::span<const int> sub_actions, const Association& e, int k);

/// Pairing branches followed by one C(K,2) branch per pair.
std::vector<int> rsu_branch_sizes(int n, int k);

struct RsuDecision {
  Association e;
  RbAllocation eta;
};

RsuDecision decode_rsu_action(std::span<const int> action, int n, int k);

/// Inverse of decode_rsu_action for a decision it can produce.
std::vector<int> encode_rsu_action(const RsuDecision& d, int k);

/// (x / extent, y / extent, v / speed cap) per roster slot; absent slots are zero.
std::vector<float> encode_rsu_observation(std::span<const std::optional<VehicleState>> roster,
                                          const WorldConfig& config);
inline int rsu_observation_width(int n) { return 3 * n; }

inline constexpr int kBlockFeatures = 8;
inline int vehicle_observation_width(int candidate_width) { return candidate_width * kBlockFeatures + 6; }

/// Per candidate: state one-hot (free, occupied, unknown), level / L, block
/// center minus own position over r (x, y), value q, validity bit. Then own and
/// peer (x / extent, y / extent, v / speed cap); peer zero when unpaired.
std::vector<float> encode_vehicle_observation(std::span<const QuadBlock> candidates, int candidate_width,
                                              const VehicleState& self, const std::optional<VehicleState>& peer,
                                              int max_level, double mu, double now_s, const WorldConfig& config);

/// Candidate indices chosen for transmission; sends on padding slots are dropped.
std::vector<int> decode_vehicle_action(std::span<const int> action, int valid_count);

/// Sender n's reward: the receiver's satisfaction scaled by `scale` (the cell area).
inline double vehicle_reward(bool paired, double receiver_satisfaction, double scale) {
  return paired ? receiver_satisfaction * scale : 0.0;
}

/// Mean over vehicles of each vehicle's mean reward over the slots it was
/// present; vehicles with no slots are left out. Zero when nobody was present.
double rsu_reward(const std::vector<std::vector<double>>& rewards_per_vehicle);

}  // namespace vcp
