#include "vcp/satisfaction.hpp"

#include <algorithm>
#include <string>

#include "vcp/error.hpp"

namespace vcp {

double block_satisfaction(const QuadBlock& block, const InterestField& interest, double mu, double now_s) {
  const double area = block.area_m2();
  if (area <= 0.0) return 0.0;
  return interest.block_sum(block.world_ix, block.world_iy, block.world_side) / area * block_value(block, mu, now_s);
}

double satisfaction(std::span<const QuadBlock> delivered, const InterestField& interest, double mu, double now_s) {
  double f = 0.0;
  for (const auto& b : delivered) f += block_satisfaction(b, interest, mu, now_s);
  return f;
}

double objective(const std::vector<std::vector<double>>& f) {
  const std::size_t n = f.size();
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (f[a].size() != n) throw DimensionError("satisfaction matrix must be square");
    for (std::size_t b = a + 1; b < n; ++b) sum += f[a][b] * f[b][a];
  }
  return sum;
}

bool ConstraintReport::ok() const { return summary().empty(); }

std::string ConstraintReport::summary() const {
  std::string out;
  auto add = [&](const std::vector<bool>& v, const char* name) {
    if (std::find(v.begin(), v.end(), true) == v.end()) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(rate_bound, "rate_bound");
  add(single_rb, "single_rb");
  add(single_association, "single_association");
  add(symmetric, "symmetric");
  add(binary, "binary");
  add(orthogonal, "orthogonal");
  return out;
}

ConstraintReport check_constraints(const Association& e, const RbAllocation& eta, const std::vector<int>& delivered,
                                   const std::vector<int>& budget) {
  const int n = e.size();
  ConstraintReport r;
  const auto sz = static_cast<std::size_t>(n);
  r.rate_bound.assign(sz, false);
  r.single_rb.assign(sz, false);
  r.single_association.assign(sz, false);
  r.symmetric.assign(sz, false);
  r.binary.assign(sz, false);
  r.orthogonal.assign(sz, false);
  const bool shaped = eta.vehicles() == n;
  for (int a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (i < delivered.size() && i < budget.size() && delivered[i] > std::max(budget[i], 0)) r.rate_bound[i] = true;
    int assoc = 0, rbs = 0;
    for (int b = 0; b < n; ++b) {
      const int v = e.at(a, b);
      if (v != 0 && v != 1) r.binary[i] = true;
      if (v != e.at(b, a)) r.symmetric[i] = true;
      assoc += v != 0 ? 1 : 0;
      if (!shaped) continue;
      for (int k = 0; k < eta.rbs(); ++k) {
        const int x = eta.at(a, b, k);
        if (x != 0 && x != 1) r.binary[i] = true;
        rbs += x != 0 ? 1 : 0;
        if (x != 0 && v != 0 && eta.at(b, a, k) != 0) r.orthogonal[i] = true;
      }
    }
    if (e.at(a, a) != 0 || assoc > 1) r.single_association[i] = true;
    if (rbs > 1) r.single_rb[i] = true;
  }
  return r;
}

std::vector<int> truncate_delivery(std::span<const int> selected, int budget, Rng& rng) {
  if (budget <= 0) return {};
  if (static_cast<int>(selected.size()) <= budget) return {selected.begin(), selected.end()};
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(budget));
  std::sample(selected.begin(), selected.end(), std::back_inserter(out), budget, rng);
  return out;
}

int fuse_block(PerceptionMap& map, const QuadBlock& block, double now_s, double mu) {
  const double p = block.probability();
  int changed = 0;
  for (int iy = block.world_iy; iy < block.world_iy + block.world_side; ++iy)
    for (int ix = block.world_ix; ix < block.world_ix + block.world_side; ++ix)
      if (map.adopt(ix, iy, p, block.sensed_at, now_s, mu)) ++changed;
  return changed;
}

}  // namespace vcp
