#pragma once

#include <span>
#include <vector>

#include "vcp/channel.hpp"
#include "vcp/common.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/sensing.hpp"

namespace vcp {

/// Contribution of one delivered block: (sum of receiver interest over the
/// block's cells / block area in m^2) * sender's value of the block.
double block_satisfaction(const QuadBlock& block, const InterestField& interest, double mu, double now_s);

/// f_nn': receiver n's satisfaction with the blocks delivered by n'.
double satisfaction(std::span<const QuadBlock> delivered, const InterestField& interest, double mu, double now_s);

/// Sum over unordered pairs {a, b} of f_ab * f_ba. `f` is square.
double objective(const std::vector<std::vector<double>>& f);

/// Per-vehicle violation flags (true = violated).
struct ConstraintReport {
  std::vector<bool> rate_bound;          // more blocks delivered than the budget allows
  std::vector<bool> single_rb;           // more than one RB per transmitter
  std::vector<bool> single_association;  // self or multiple association
  std::vector<bool> symmetric;           // e_ab != e_ba
  std::vector<bool> binary;              // non 0/1 entries
  std::vector<bool> orthogonal;          // RBs inside an associated pair overlap

  bool ok() const;
  /// Comma-separated names of the violated constraints ("" when ok).
  std::string summary() const;
};

/// `delivered[n]` blocks sent by transmitter n this slot, `budget[n]` its
/// deliverable count (floor of the accumulated rate). Never throws.
ConstraintReport check_constraints(const Association& e, const RbAllocation& eta, const std::vector<int>& delivered,
                                   const std::vector<int>& budget);

/// Indices of the selected blocks that get through when only `budget` fit:
/// all of them if they fit, otherwise a uniform random subset (kept in order).
std::vector<int> truncate_delivery(std::span<const int> selected, int budget, Rng& rng);

/// Fuses a received block into the receiver's map cell by cell (value-maximizing adopt).
/// Returns the number of cells that changed.
int fuse_block(PerceptionMap& map, const QuadBlock& block, double now_s, double mu);

}  // namespace vcp
