#pragma once

#include <span>
#include <vector>

namespace vcp {

struct FedConfig {
  bool enabled = false;
  int period_frames = 1;
};

void validate(const FedConfig& config);

/// Element-wise mean with 64-bit accumulation. Throws on an empty list or a
/// shape mismatch.
std::vector<float> aggregate(std::span<const std::vector<float>> models);

/// Largest L2 distance from any model to the element-wise mean.
double l2_spread(std::span<const std::vector<float>> models);

struct FedRound {
  long long frame = 0;
  int participants = 0;
  double spread_before = 0.0;
  double spread_after = 0.0;
};

}  // namespace vcp
