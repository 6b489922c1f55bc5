#include "vcp/federation.hpp"

#include <cmath>

#include "vcp/error.hpp"

namespace vcp {

void validate(const FedConfig& c) {
  if (c.period_frames < 1) throw ConfigError("federation period must be at least one frame");
}

namespace {

std::vector<double> mean_of(std::span<const std::vector<float>> models) {
  if (models.empty()) throw RangeError("cannot aggregate an empty model list");
  const std::size_t n = models.front().size();
  std::vector<double> acc(n, 0.0);
  for (const auto& m : models) {
    if (m.size() != n) throw DimensionError("models to aggregate differ in shape");
    for (std::size_t i = 0; i < n; ++i) acc[i] += m[i];
  }
  const double inv = 1.0 / static_cast<double>(models.size());
  for (double& v : acc) v *= inv;
  return acc;
}

}  // namespace

std::vector<float> aggregate(std::span<const std::vector<float>> models) {
  const auto acc = mean_of(models);
  std::vector<float> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i]);
  return out;
}

double l2_spread(std::span<const std::vector<float>> models) {
  if (models.empty()) return 0.0;
  const auto acc = mean_of(models);
  double worst = 0.0;
  for (const auto& m : models) {
    double sq = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double d = m[i] - acc[i];
      sq += d * d;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

}  // namespace vcp
