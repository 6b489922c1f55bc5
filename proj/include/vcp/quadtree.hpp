#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vcp/common.hpp"
#include "vcp/sensing.hpp"

namespace vcp {

/// Number of tree nodes on levels 0..L-1, i.e. (4^L - 1) / 3. This is the
/// transmit-candidate cap for blocks from the current sensing range.
int quadtree_candidate_cap(int max_level);

/// s+ if any cell is s+, s- if all cells are s-, s0 otherwise.
CellState block_state(std::span<const CellState> cells);

struct QuadBlock {
  int level = 0;
  std::uint32_t path = 0;  // quadrant digits from the root, two bits per level, most significant first
  int qx = 0;              // origin inside the tree, in finest quadtree cells
  int qy = 0;
  int side = 1;            // 2^(L - level) finest quadtree cells
  CellState state = CellState::Unknown;
  double sensed_at = 0.0;  // Gamma, seconds
  int source = -1;         // vehicle id that sensed it
  double reliability = 1.0;
  int world_ix = 0;        // world cell of the block's low corner
  int world_iy = 0;
  int world_side = 0;      // side in world cells
  double cell_m = 1.0;

  double probability() const { return occupancy_probability(state, reliability); }
  double area_m2() const { return (world_side * cell_m) * (world_side * cell_m); }
  Vec2 center() const {
    return {(world_ix + world_side / 2.0) * cell_m, (world_iy + world_side / 2.0) * cell_m};
  }
  /// Quadrant path as a digit string ("" for the root).
  std::string path_string() const;
};

/// q(b) = |2 p(b) - 1| * mu^(now - Gamma).
double block_value(const QuadBlock& block, double mu, double now_s);

struct QuadNode {
  QuadBlock block;
  int first_child = -1;  // the four children are contiguous
  bool leaf() const { return first_child < 0; }
};

/// Region quadtree of a 2^L x 2^L three-state patch. Nodes are stored
/// breadth-first, so the coarsest blocks come first.
class QuadTree {
 public:
  /// Splits until a block is uniform or reaches level L.
  static QuadTree decompose(const Grid2D<CellState>& patch, int max_level);

  int max_level() const { return max_level_; }
  const std::vector<QuadNode>& nodes() const { return nodes_; }
  std::vector<QuadBlock> leaves() const;
  /// Nodes on levels 0..L-1 in breadth-first order (at most quadtree_candidate_cap(L)).
  std::vector<QuadBlock> candidates() const;

  /// Rebuilds the patch from the leaves.
  Grid2D<CellState> recompose() const;

  /// Debug dumps: JSON array of {level, path, state}; ASCII rendering of the leaf map.
  std::string to_json() const;
  std::string to_ascii() const;

  /// Anchors every block in world coordinates and stamps its provenance.
  void anchor(int world_ix, int world_iy, int world_cells_per_leaf, double cell_m, int source, double sensed_at,
              double reliability);

 private:
  int max_level_ = 0;
  std::vector<QuadNode> nodes_;
};

/// Rebuilds a patch from a leaf set (leaves must partition it).
Grid2D<CellState> recompose(std::span<const QuadBlock> leaves, int max_level);

/// Reduces the sensing window to 2^L x 2^L by applying block_state to each group of cells.
Grid2D<CellState> aggregate_window(const SensedGrid& sensed, int max_level);

/// Quadtree of a vehicle's current sensing window, anchored in world coordinates.
QuadTree build_quadtree(const SensedGrid& sensed, const VehicleState& vehicle, int max_level, double cell_m);

/// Blocks available for transmission: the current tree's candidates (B_c) and
/// older or received blocks (B_p), capped with highest-AoI-first eviction.
class BlockInventory {
 public:
  explicit BlockInventory(int max_past = 10) : max_past_(max_past) {}

  int max_past() const { return max_past_; }
  const std::vector<QuadBlock>& current() const { return current_; }
  const std::vector<QuadBlock>& past() const { return past_; }

  void set_current(std::vector<QuadBlock> blocks) { current_ = std::move(blocks); }

  /// Appends to B_p, then evicts oldest first (ties: lower q, then earlier insertion).
  void apply_received(std::span<const QuadBlock> blocks, double now_s, double mu);

  /// Encoded candidate order: current blocks (capped at (4^L - 1)/3), then past blocks newest-first.
  std::vector<QuadBlock> candidate_list(int max_level) const;
  /// |B|_max = (4^L - 1)/3 + B_max_p.
  int candidate_width(int max_level) const { return quadtree_candidate_cap(max_level) + max_past_; }

  void clear() {
    current_.clear();
    past_.clear();
  }

 private:
  int max_past_;
  std::vector<QuadBlock> current_;
  std::vector<QuadBlock> past_;
};

/// Fixed-size packet layout used for byte accounting: level (3 bits), quadrant
/// path (2L bits), state (2 bits), age (8 bits), zero padding to M bits.
struct BlockWireFormat {
  int max_level = 5;
  int block_bits = 800;
  double age_quantum_s = 0.01;
};

struct DecodedBlock {
  int level = 0;
  std::uint32_t path = 0;
  CellState state = CellState::Unknown;
  int age_units = 0;
};

std::vector<std::uint8_t> encode_block(const QuadBlock& block, double now_s, const BlockWireFormat& format);
DecodedBlock decode_block(std::span<const std::uint8_t> bytes, const BlockWireFormat& format);

}  // namespace vcp
