#include "vcp/agents.hpp"

#include <algorithm>

#include "vcp/error.hpp"

namespace vcp {

std::vector<int> pairing_branch_sizes(int n) {
  if (n < 2) throw ConfigError("pairing needs at least two vehicles");
  std::vector<int> out;
  for (int i = 1; i <= n / 2; ++i) out.push_back(n - 2 * i + 1);
  return out;
}

long long pairing_count(int n) {
  long long c = 1;
  for (int j : pairing_branch_sizes(n)) c *= j;
  return c;
}

Association decode_pairing(std::span<const int> sub_actions, int n) {
  const auto sizes = pairing_branch_sizes(n);
  if (sub_actions.size() != sizes.size()) throw DimensionError("wrong number of pairing sub-actions");
  std::vector<int> remaining(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;
  Association e(n);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int k = sub_actions[i];
    if (k < 0 || k >= sizes[i]) throw RangeError("pairing sub-action out of range");
    const int a = remaining[0];
    const int b = remaining[static_cast<std::size_t>(k) + 1];
    e.pair(a, b);
    remaining.erase(remaining.begin() + k + 1);
    remaining.erase(remaining.begin());
  }
  return e;
}

std::vector<std::pair<int, int>> pairs_of(const Association& e) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < e.size(); ++a)
    for (int b = a + 1; b < e.size(); ++b)
      if (e.at(a, b) == 1) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<int, int>> rb_combinations(int k) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) out.emplace_back(a, b);
  return out;
}

RbAllocation decode_rb(std::span<const int> sub_actions, const Association& e, int k) {
  const auto combos = rb_combinations(k);
  const auto pairs = pairs_of(e);
  if (sub_actions.size() < pairs.size()) throw DimensionError("fewer RB sub-actions than pairs");
  RbAllocation eta(e.size(), k);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int c = sub_actions[i];
    if (c < 0 || c >= static_cast<int>(combos.size())) throw RangeError("RB sub-action out of range");
    const auto [lo, hi] = pairs[i];
    eta.at(lo, hi, combos[static_cast<std::size_t>(c)].first) = 1;
    eta.at(hi, lo, combos[static_cast<std::size_t>(c)].second) = 1;
  }
  return eta;
}

std::vector<int> rsu_branch_sizes(int n, int k) {
  auto sizes = pairing_branch_sizes(n);
  const int combos = k * (k - 1) / 2;
  if (combos < 1) throw ConfigError("RB allocation needs K >= 2");
  sizes.insert(sizes.end(), static_cast<std::size_t>(n / 2), combos);
  return sizes;
}

RsuDecision decode_rsu_action(std::span<const int> action, int n, int k) {
  const std::size_t np = static_cast<std::size_t>(n / 2);
  if (action.size() != 2 * np) throw DimensionError("RSU action has the wrong number of branches");
  RsuDecision d;
  d.e = decode_pairing(action.subspan(0, np), n);
  d.eta = decode_rb(action.subspan(np), d.e, k);
  return d;
}

std::vector<int> encode_rsu_action(const RsuDecision& d, int k) {
  const int n = d.e.size();
  std::vector<int> remaining(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;
  std::vector<int> action;
  while (remaining.size() >= 2) {
    const int a = remaining[0];
    const int b = d.e.partner(a);
    const auto it = std::find(remaining.begin(), remaining.end(), b);
    if (b < 0 || it == remaining.end()) throw ConstraintViolation("association is not decodable");
    action.push_back(static_cast<int>(it - remaining.begin()) - 1);
    remaining.erase(it);
    remaining.erase(remaining.begin());
  }
  const auto combos = rb_combinations(k);
  for (const auto& [lo, hi] : pairs_of(d.e)) {
    const std::pair<int, int> c{d.eta.rb_of(lo), d.eta.rb_of(hi)};
    const auto it = std::find(combos.begin(), combos.end(), c);
    if (it == combos.end()) throw ConstraintViolation("allocation is not decodable");
    action.push_back(static_cast<int>(it - combos.begin()));
  }
  return action;
}

std::vector<float> encode_rsu_observation(std::span<const std::optional<VehicleState>> roster,
                                          const WorldConfig& config) {
  std::vector<float> out(roster.size() * 3, 0.0f);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    if (!roster[i]) continue;
    out[3 * i] = static_cast<float>(roster[i]->position.x / config.extent_m);
    out[3 * i + 1] = static_cast<float>(roster[i]->position.y / config.extent_m);
    out[3 * i + 2] = static_cast<float>(roster[i]->speed / config.speed_cap_mps);
  }
  return out;
}

std::vector<float> encode_vehicle_observation(std::span<const QuadBlock> candidates, int candidate_width,
                                              const VehicleState& self, const std::optional<VehicleState>& peer,
                                              int max_level, double mu, double now_s, const WorldConfig& config) {
  std::vector<float> out(static_cast<std::size_t>(vehicle_observation_width(candidate_width)), 0.0f);
  const std::size_t used = std::min(candidates.size(), static_cast<std::size_t>(candidate_width));
  const double r = config.sensing_radius_m;
  for (std::size_t i = 0; i < used; ++i) {
    const auto& b = candidates[i];
    float* f = out.data() + i * kBlockFeatures;
    switch (b.state) {
      case CellState::Unoccupied: f[0] = 1.0f; break;
      case CellState::Occupied: f[1] = 1.0f; break;
      case CellState::Unknown: f[2] = 1.0f; break;
    }
    f[3] = max_level > 0 ? static_cast<float>(b.level) / static_cast<float>(max_level) : 0.0f;
    const Vec2 c = b.center();
    f[4] = static_cast<float>((c.x - self.position.x) / r);
    f[5] = static_cast<float>((c.y - self.position.y) / r);
    f[6] = static_cast<float>(block_value(b, mu, now_s));
    f[7] = 1.0f;
  }
  float* tail = out.data() + static_cast<std::size_t>(candidate_width) * kBlockFeatures;
  auto put = [&](float* p, const VehicleState& v) {
    p[0] = static_cast<float>(v.position.x / config.extent_m);
    p[1] = static_cast<float>(v.position.y / config.extent_m);
    p[2] = static_cast<float>(v.speed / config.speed_cap_mps);
  };
  put(tail, self);
  if (peer) put(tail + 3, *peer);
  return out;
}

std::vector<int> decode_vehicle_action(std::span<const int> action, int valid_count) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(action.size()) && i < valid_count; ++i)
    if (action[static_cast<std::size_t>(i)] != 0) out.push_back(i);
  return out;
}

double rsu_reward(const std::vector<std::vector<double>>& rewards_per_vehicle) {
  double sum = 0.0;
  int present = 0;
  for (const auto& v : rewards_per_vehicle) {
    if (v.empty()) continue;
    double s = 0.0;
    for (double x : v) s += x;
    sum += s / static_cast<double>(v.size());
    ++present;
  }
  return present > 0 ? sum / present : 0.0;
}

}  // namespace vcp
