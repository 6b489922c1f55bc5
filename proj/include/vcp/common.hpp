#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace vcp {

using Rng = std::mt19937_64;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Three-state occupancy used by ground truth, sensors and quadtree blocks.
enum class CellState : std::uint8_t {
  Unoccupied = 0,  // s-
  Occupied = 1,    // s+
  Unknown = 2,     // s0
};

const char* to_string(CellState s);

/// Integer cell coordinate on the world grid.
struct CellIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(CellIndex, CellIndex) = default;
};

/// Dense row-major 2-D array.
template <typename T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < width_ && iy < height_; }

  T& at(int ix, int iy) { return data_[index(ix, iy)]; }
  const T& at(int ix, int iy) const { return data_[index(ix, iy)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(ix);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Derives an independent, reproducible generator for (seed, stream, index).
/// Splitmix64 finalizer over the mixed key.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(mix_seed(seed, stream, index));
}

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace vcp
