#pragma once

#include <span>
#include <vector>

#include "vcp/agents.hpp"
#include "vcp/channel.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/sensing.hpp"

namespace vcp {

struct BlockSelection {
  std::vector<int> indices;  // ascending
  double value = 0.0;        // receiver satisfaction (unscaled)
};

/// Exact maximizer of the receiver's satisfaction over all subsets of at most
/// `budget` candidates. Ties go to the lexicographically smallest index list.
/// Throws GuardExceeded above `max_candidates`.
BlockSelection oracle_blocks(std::span<const QuadBlock> candidates, const InterestField& receiver_interest, double mu,
                             double now_s, int budget, int max_candidates = 22);

/// Same search over precomputed per-block contributions.
BlockSelection oracle_blocks(std::span<const double> contributions, int budget, int max_candidates = 22);

/// Best `budget` positive contributions; same value as the enumeration since the
/// objective is additive over blocks. No size guard.
BlockSelection top_blocks(std::span<const double> contributions, int budget);

/// Enumeration within `max_candidates`, top_blocks beyond it.
BlockSelection best_blocks(std::span<const double> contributions, int budget, int max_candidates = 22);

/// Everything the RSU oracle needs about one slot.
struct RsuSnapshot {
  std::vector<Vec2> positions;                      // per roster slot
  std::vector<std::vector<QuadBlock>> candidates;   // per sender
  std::vector<InterestField> interest;              // per receiver
  double mu = 0.9;
  double now_s = 0.0;
};

struct RsuOracleResult {
  RsuDecision decision;
  std::vector<int> action;
  double objective = 0.0;
  int evaluated = 0;
};

/// Exhaustive search over pairings and RB pairs maximizing the objective with
/// oracle block selection, fading disabled and budgets floor(R).
RsuOracleResult oracle_rsu(const RsuSnapshot& snapshot, const WorldConfig& world, const NetConfig& net,
                           int max_vehicles = 4, int max_rbs = 4);

}  // namespace vcp
