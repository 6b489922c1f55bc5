#include "vcp/common.hpp"

namespace vcp {

const char* to_string(CellState s) {
  switch (s) {
    case CellState::Unoccupied: return "free";
    case CellState::Occupied: return "occupied";
    case CellState::Unknown: return "unknown";
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ stream) ^ index);
}

}  // namespace vcp
