#include "vcp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "vcp/error.hpp"
#include "vcp/satisfaction.hpp"

namespace vcp {

namespace {

std::vector<int> members(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1U) out.push_back(i);
  return out;
}

}  // namespace

BlockSelection oracle_blocks(std::span<const double> contributions, int budget, int max_candidates) {
  const int n = static_cast<int>(contributions.size());
  if (n > max_candidates || n > 30) throw GuardExceeded("oracle enumeration guard exceeded");
  BlockSelection best;
  if (budget <= 0) return best;
  std::uint32_t best_mask = 0;
  const std::uint32_t end = 1U << n;
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    if (std::popcount(mask) > budget) continue;
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) v += contributions[static_cast<std::size_t>(i)];
    if (v > best.value || (v == best.value && members(mask) < members(best_mask))) {
      best.value = v;
      best_mask = mask;
    }
  }
  best.indices = members(best_mask);
  return best;
}

BlockSelection oracle_blocks(std::span<const QuadBlock> candidates, const InterestField& receiver_interest, double mu,
                             double now_s, int budget, int max_candidates) {
  if (static_cast<int>(candidates.size()) > max_candidates) throw GuardExceeded("oracle enumeration guard exceeded");
  std::vector<double> c;
  c.reserve(candidates.size());
  for (const auto& b : candidates) c.push_back(block_satisfaction(b, receiver_interest, mu, now_s));
  return oracle_blocks(c, budget, max_candidates);
}

BlockSelection top_blocks(std::span<const double> contributions, int budget) {
  BlockSelection out;
  if (budget <= 0) return out;
  std::vector<int> order(contributions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return contributions[static_cast<std::size_t>(a)] > contributions[static_cast<std::size_t>(b)];
  });
  for (int idx : order) {
    if (static_cast<int>(out.indices.size()) >= budget) break;
    const double v = contributions[static_cast<std::size_t>(idx)];
    if (v <= 0.0) break;
    out.indices.push_back(idx);
    out.value += v;
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

BlockSelection best_blocks(std::span<const double> contributions, int budget, int max_candidates) {
  if (static_cast<int>(contributions.size()) <= std::min(max_candidates, 30))
    return oracle_blocks(contributions, budget, max_candidates);
  return top_blocks(contributions, budget);
}

RsuOracleResult oracle_rsu(const RsuSnapshot& s, const WorldConfig& world, const NetConfig& net, int max_vehicles,
                           int max_rbs) {
  const int n = static_cast<int>(s.positions.size());
  if (n > max_vehicles || net.rb_count > max_rbs) throw GuardExceeded("RSU oracle limited to small N and K");
  if (s.candidates.size() != s.positions.size() || s.interest.size() != s.positions.size())
    throw DimensionError("snapshot vectors differ in length");
  ChannelParams params = net.channel;
  params.fading = false;
  Rng unused(0);
  const std::vector<bool> present(static_cast<std::size_t>(n), true);
  const GainTensor gains = compute_gains(s.positions, present, net.rb_count, world, params, unused);

  // Per-direction contributions do not depend on the allocation.
  std::vector<std::vector<std::vector<double>>> contrib(static_cast<std::size_t>(n));
  for (int tx = 0; tx < n; ++tx) {
    contrib[static_cast<std::size_t>(tx)].resize(static_cast<std::size_t>(n));
    for (int rx = 0; rx < n; ++rx) {
      if (tx == rx) continue;
      auto& c = contrib[static_cast<std::size_t>(tx)][static_cast<std::size_t>(rx)];
      for (const auto& b : s.candidates[static_cast<std::size_t>(tx)])
        c.push_back(block_satisfaction(b, s.interest[static_cast<std::size_t>(rx)], s.mu, s.now_s));
    }
  }

  const auto sizes = rsu_branch_sizes(n, net.rb_count);
  std::vector<int> action(sizes.size(), 0);
  RsuOracleResult best;
  best.objective = -1.0;
  while (true) {
    const auto d = decode_rsu_action(action, n, net.rb_count);
    const auto rates = compute_rates(d.e, d.eta, gains, net);
    std::vector<std::vector<double>> f(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (const auto& [a, b] : pairs_of(d.e)) {
      for (const auto& [tx, rx] : {std::pair{a, b}, std::pair{b, a}}) {
        const int budget = static_cast<int>(std::floor(rates[static_cast<std::size_t>(tx)][static_cast<std::size_t>(rx)]));
        f[static_cast<std::size_t>(rx)][static_cast<std::size_t>(tx)] =
            oracle_blocks(contrib[static_cast<std::size_t>(tx)][static_cast<std::size_t>(rx)], budget).value;
      }
    }
    const double obj = objective(f);
    ++best.evaluated;
    if (obj > best.objective) {
      best.objective = obj;
      best.decision = d;
      best.action = action;
    }
    std::size_t i = 0;
    while (i < sizes.size() && ++action[i] == sizes[i]) action[i++] = 0;
    if (i == sizes.size()) break;
  }
  return best;
}

}  // namespace vcp
