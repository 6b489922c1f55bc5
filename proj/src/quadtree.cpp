#include "vcp/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "vcp/error.hpp"

namespace vcp {

int quadtree_candidate_cap(int max_level) {
  int total = 0, level_count = 1;
  for (int l = 0; l < max_level; ++l) {
    total += level_count;
    level_count *= 4;
  }
  return total;
}

CellState block_state(std::span<const CellState> cells) {
  if (cells.empty()) throw RangeError("block_state of an empty block");
  bool all_free = true;
  for (CellState c : cells) {
    if (c == CellState::Occupied) return CellState::Occupied;
    if (c != CellState::Unoccupied) all_free = false;
  }
  return all_free ? CellState::Unoccupied : CellState::Unknown;
}

std::string QuadBlock::path_string() const {
  std::string s;
  for (int l = level - 1; l >= 0; --l) s.push_back(static_cast<char>('0' + ((path >> (2 * l)) & 3U)));
  return s;
}

double block_value(const QuadBlock& block, double mu, double now_s) {
  return cell_value(block.probability(), now_s - block.sensed_at, mu);
}

// ---------------------------------------------------------------------------

QuadTree QuadTree::decompose(const Grid2D<CellState>& patch, int max_level) {
  if (max_level < 0 || max_level > 7) throw RangeError("quadtree level must lie in [0, 7]");
  const int n = 1 << max_level;
  if (patch.width() != n || patch.height() != n) throw DimensionError("patch side must equal 2^L");

  QuadTree tree;
  tree.max_level_ = max_level;
  QuadNode root;
  root.block.side = n;
  tree.nodes_.push_back(root);

  std::vector<CellState> cells;
  for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
    QuadBlock b = tree.nodes_[i].block;
    cells.clear();
    for (int y = b.qy; y < b.qy + b.side; ++y)
      for (int x = b.qx; x < b.qx + b.side; ++x) cells.push_back(patch.at(x, y));
    tree.nodes_[i].block.state = block_state(cells);
    const bool uniform = std::all_of(cells.begin(), cells.end(), [&](CellState c) { return c == cells.front(); });
    if (uniform || b.level == max_level) continue;

    tree.nodes_[i].first_child = static_cast<int>(tree.nodes_.size());
    const int half = b.side / 2;
    for (std::uint32_t q = 0; q < 4; ++q) {
      QuadNode child;
      child.block.level = b.level + 1;
      child.block.path = (b.path << 2) | q;
      child.block.side = half;
      child.block.qx = b.qx + ((q & 1U) ? half : 0);
      child.block.qy = b.qy + ((q & 2U) ? half : 0);
      tree.nodes_.push_back(child);
    }
  }
  return tree;
}

std::vector<QuadBlock> QuadTree::leaves() const {
  std::vector<QuadBlock> out;
  for (const auto& n : nodes_)
    if (n.leaf()) out.push_back(n.block);
  return out;
}

std::vector<QuadBlock> QuadTree::candidates() const {
  std::vector<QuadBlock> out;
  for (const auto& n : nodes_)
    if (n.block.level < max_level_) out.push_back(n.block);
  return out;
}

Grid2D<CellState> recompose(std::span<const QuadBlock> leaves, int max_level) {
  const int n = 1 << max_level;
  Grid2D<CellState> out(n, n, CellState::Unknown);
  for (const auto& b : leaves) {
    for (int y = b.qy; y < b.qy + b.side; ++y)
      for (int x = b.qx; x < b.qx + b.side; ++x) out.at(x, y) = b.state;
  }
  return out;
}

Grid2D<CellState> QuadTree::recompose() const {
  const auto l = leaves();
  return vcp::recompose(l, max_level_);
}

std::string QuadTree::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : nodes_) {
    arr.push_back({{"level", n.block.level},
                   {"path", n.block.path_string()},
                   {"state", to_string(n.block.state)},
                   {"leaf", n.leaf()}});
  }
  return arr.dump();
}

std::string QuadTree::to_ascii() const {
  const auto grid = recompose();
  std::ostringstream out;
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) {
      switch (grid.at(x, y)) {
        case CellState::Occupied: out << '#'; break;
        case CellState::Unoccupied: out << '.'; break;
        case CellState::Unknown: out << '?'; break;
      }
    }
    out << '\n';
  }
  return out.str();
}

void QuadTree::anchor(int world_ix, int world_iy, int world_cells_per_leaf, double cell_m, int source, double sensed_at,
                      double reliability) {
  for (auto& n : nodes_) {
    auto& b = n.block;
    b.world_ix = world_ix + b.qx * world_cells_per_leaf;
    b.world_iy = world_iy + b.qy * world_cells_per_leaf;
    b.world_side = b.side * world_cells_per_leaf;
    b.cell_m = cell_m;
    b.source = source;
    b.sensed_at = sensed_at;
    b.reliability = reliability;
  }
}

Grid2D<CellState> aggregate_window(const SensedGrid& sensed, int max_level) {
  const int n = 1 << max_level;
  if (sensed.side % n != 0) throw DimensionError("sensing window is not divisible into 2^L cells");
  const int group = sensed.side / n;
  Grid2D<CellState> patch(n, n, CellState::Unknown);
  std::vector<CellState> cells(static_cast<std::size_t>(group * group));
  for (int py = 0; py < n; ++py) {
    for (int px = 0; px < n; ++px) {
      std::size_t k = 0;
      for (int y = 0; y < group; ++y)
        for (int x = 0; x < group; ++x) cells[k++] = sensed.states.at(px * group + x, py * group + y);
      patch.at(px, py) = block_state(cells);
    }
  }
  return patch;
}

QuadTree build_quadtree(const SensedGrid& sensed, const VehicleState& vehicle, int max_level, double cell_m) {
  auto tree = QuadTree::decompose(aggregate_window(sensed, max_level), max_level);
  tree.anchor(sensed.origin_ix, sensed.origin_iy, sensed.side >> max_level, cell_m, vehicle.id, sensed.sensed_at,
              vehicle.reliability);
  return tree;
}

// ---------------------------------------------------------------------------

void BlockInventory::apply_received(std::span<const QuadBlock> blocks, double now_s, double mu) {
  past_.insert(past_.end(), blocks.begin(), blocks.end());
  if (static_cast<int>(past_.size()) <= max_past_) return;
  std::vector<std::size_t> order(past_.size());
  std::iota(order.begin(), order.end(), 0);
  // Keep order: newest first; among equal age higher q first; then later insertion first.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = past_[a];
    const auto& y = past_[b];
    if (x.sensed_at != y.sensed_at) return x.sensed_at > y.sensed_at;
    const double qx = block_value(x, mu, now_s), qy = block_value(y, mu, now_s);
    if (qx != qy) return qx > qy;
    return a > b;
  });
  order.resize(static_cast<std::size_t>(std::max(max_past_, 0)));
  std::sort(order.begin(), order.end());
  std::vector<QuadBlock> kept;
  kept.reserve(order.size());
  for (auto i : order) kept.push_back(past_[i]);
  past_ = std::move(kept);
}

std::vector<QuadBlock> BlockInventory::candidate_list(int max_level) const {
  const auto cap = static_cast<std::size_t>(quadtree_candidate_cap(max_level));
  std::vector<QuadBlock> out;
  for (const auto& b : current_) {
    if (out.size() >= cap) break;
    if (b.level < max_level) out.push_back(b);
  }
  std::vector<std::size_t> order(past_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return past_[a].sensed_at > past_[b].sensed_at; });
  for (std::size_t k = 0; k < order.size() && static_cast<int>(k) < max_past_; ++k) out.push_back(past_[order[k]]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  void put(std::uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) {
      if ((value >> i) & 1U) bytes_[pos_ / 8] |= static_cast<std::uint8_t>(0x80U >> (pos_ % 8));
      ++pos_;
    }
  }

 private:
  std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t get(int bits) {
    std::uint32_t v = 0;
    for (int i = 0; i < bits; ++i) {
      v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1U);
      ++pos_;
    }
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_block(const QuadBlock& block, double now_s, const BlockWireFormat& format) {
  const int header = 3 + 2 * format.max_level + 2 + 8;
  if (format.block_bits % 8 != 0 || header > format.block_bits) throw ConfigError("block does not fit in M bits");
  if (block.level > format.max_level || block.level > 7) throw RangeError("block level exceeds the wire format");
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(format.block_bits / 8), 0);
  BitWriter w(bytes);
  w.put(static_cast<std::uint32_t>(block.level), 3);
  // Path left-aligned in its 2L-bit field.
  w.put(block.path << (2 * (format.max_level - block.level)), 2 * format.max_level);
  w.put(static_cast<std::uint32_t>(block.state), 2);
  const double age = std::max(0.0, now_s - block.sensed_at);
  w.put(static_cast<std::uint32_t>(std::min(255.0, std::floor(age / format.age_quantum_s))), 8);
  return bytes;
}

DecodedBlock decode_block(std::span<const std::uint8_t> bytes, const BlockWireFormat& format) {
  if (static_cast<int>(bytes.size()) * 8 != format.block_bits) throw DimensionError("packet size differs from M");
  BitReader r(bytes);
  DecodedBlock d;
  d.level = static_cast<int>(r.get(3));
  d.path = r.get(2 * format.max_level) >> (2 * (format.max_level - d.level));
  const auto s = r.get(2);
  if (s > 2) throw RangeError("invalid block state on the wire");
  d.state = static_cast<CellState>(s);
  d.age_units = static_cast<int>(r.get(8));
  return d;
}

}  // namespace vcp
