#include "vcp/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vcp/error.hpp"

namespace vcp {

Env::Env(const ExperimentConfig& config, const MobilityTrace& trace, std::uint64_t seed)
    : config_(config),
      trace_(&trace),
      world_(config.world),
      n_(config.world.n_max),
      fading_rng_(make_stream(seed, 1)),
      delivery_rng_(make_stream(seed, 2)),
      sensor_rng_(make_stream(seed, 3)) {
  const auto n = static_cast<std::size_t>(n_);
  roster_.assign(n, -1);
  states_.assign(n, std::nullopt);
  maps_.assign(n, PerceptionMap(world_.cells()));
  inventories_.assign(n, BlockInventory(config_.max_past));
  candidates_.assign(n, {});
  interest_.assign(n, InterestField());
  budget_.assign(n, 0);
  decision_ = {Association(n_), RbAllocation(n_, config_.net.rb_count)};
  credit_ = RateCredit(n_);
}

std::vector<int> Env::episode_starts(int length, int min_present, int stride) const {
  std::vector<std::pair<int, int>> spans;
  for (const auto& v : trace_->vehicles()) {
    const auto p = trace_->presence(v.id);
    if (p.first >= 0) spans.push_back(p);
  }
  std::vector<int> out;
  const int last = trace_->slot_count() - length - 1;
  for (int s = 0; s <= last; s += std::max(stride, 1)) {
    int count = 0;
    for (const auto& [a, b] : spans)
      if (a <= s && b >= s + length) ++count;
    if (count >= min_present) out.push_back(s);
  }
  return out;
}

void Env::reset(int slot) {
  if (slot < 0 || slot >= trace_->slot_count()) throw RangeError("episode start outside the trace");
  slot_ = slot;
  std::fill(roster_.begin(), roster_.end(), -1);
  std::fill(states_.begin(), states_.end(), std::nullopt);
  for (auto& m : maps_) m.reset();
  for (auto& inv : inventories_) inv.clear();
  for (auto& c : candidates_) c.clear();
  std::fill(interest_.begin(), interest_.end(), InterestField());
  decision_ = {Association(n_), RbAllocation(n_, config_.net.rb_count)};
  credit_.reset();
  links_.clear();
  links_ready_ = false;
}

void Env::begin_frame() {
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    if (roster_[i] < 0) continue;
    if (!trace_->find(slot_, roster_[i])) {
      roster_[i] = -1;
      states_[i].reset();
      maps_[i].reset();
      inventories_[i].clear();
      candidates_[i].clear();
    }
  }
  std::vector<std::pair<int, int>> arrivals;  // (entry slot, id)
  for (const auto& s : trace_->at(slot_)) {
    if (std::find(roster_.begin(), roster_.end(), s.id) != roster_.end()) continue;
    const auto* info = trace_->info(s.id);
    arrivals.emplace_back(info ? info->entry_slot : 0, s.id);
  }
  std::sort(arrivals.begin(), arrivals.end());
  std::size_t next = 0;
  for (std::size_t i = 0; i < roster_.size() && next < arrivals.size(); ++i) {
    if (roster_[i] >= 0) continue;
    roster_[i] = arrivals[next++].second;
    maps_[i].reset();
    inventories_[i].clear();
    candidates_[i].clear();
  }
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    if (roster_[i] < 0) continue;
    states_[i] = world_.vehicle_state(*trace_, *trace_->find(slot_, roster_[i]));
  }
  credit_.reset();
}

std::vector<float> Env::rsu_observation() const { return encode_rsu_observation(states_, config_.world); }

void Env::set_decision(const RsuDecision& d) {
  if (d.e.size() != n_ || d.eta.vehicles() != n_ || d.eta.rbs() != config_.net.rb_count)
    throw DimensionError("RSU decision does not match the roster");
  decision_ = d;
  for (const auto& [a, b] : pairs_of(d.e)) {
    if (present(a) && present(b)) continue;
    decision_.e.at(a, b) = decision_.e.at(b, a) = 0;
    for (int k = 0; k < decision_.eta.rbs(); ++k) decision_.eta.at(a, b, k) = decision_.eta.at(b, a, k) = 0;
  }
}

bool Env::active(int i) const {
  if (!present(i)) return false;
  const int p = decision_.e.partner(i);
  return p >= 0 && present(p);
}

int Env::partner(int i) const { return decision_.e.partner(i); }

void Env::sense() {
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    if (roster_[i] < 0) continue;
    const auto* s = trace_->find(slot_, roster_[i]);
    if (!s) {
      roster_[i] = -1;
      states_[i].reset();
      candidates_[i].clear();
      continue;
    }
    states_[i] = world_.vehicle_state(*trace_, *s);
  }
  const GroundTruth truth = world_.step_world(*trace_, slot_);
  const double t = now();
  for (int i = 0; i < n_; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    interest_[ui] = InterestField();
    if (!present(i)) continue;
    const VehicleState& v = *states_[ui];
    const SensedGrid sensed = vcp::sense(world_, v, truth, t, sensor_rng_);
    maps_[ui].integrate(sensed, v.reliability);
    const QuadTree tree = build_quadtree(sensed, v, config_.max_level, config_.world.cell_m);
    inventories_[ui].set_current(tree.candidates());
    candidates_[ui] = inventories_[ui].candidate_list(config_.max_level);
  }
  for (int i = 0; i < n_; ++i) {
    if (!active(i)) continue;
    const auto ui = static_cast<std::size_t>(i);
    interest_[ui] = InterestField::compute(world_, *states_[ui], maps_[ui], t, config_.sensing);
  }
  links_ready_ = false;
}

std::vector<float> Env::vehicle_observation(int i) const {
  const auto ui = static_cast<std::size_t>(i);
  if (!present(i)) throw RangeError("observation requested for an absent roster slot");
  std::optional<VehicleState> peer;
  const int p = partner(i);
  if (p >= 0 && present(p)) peer = states_[static_cast<std::size_t>(p)];
  return encode_vehicle_observation(candidates_[ui], config_.candidate_width(), *states_[ui], peer,
                                    config_.max_level, config_.sensing.mu, now(), config_.world);
}

int Env::valid_candidates(int i) const {
  return std::min(static_cast<int>(candidates_[static_cast<std::size_t>(i)].size()), config_.candidate_width());
}

void Env::prepare_links() {
  std::vector<Vec2> pos(static_cast<std::size_t>(n_));
  std::vector<bool> here(static_cast<std::size_t>(n_), false);
  for (int i = 0; i < n_; ++i) {
    if (!present(i)) continue;
    pos[static_cast<std::size_t>(i)] = states_[static_cast<std::size_t>(i)]->position;
    here[static_cast<std::size_t>(i)] = true;
  }
  const GainTensor gains = compute_gains(pos, here, config_.net.rb_count, config_.world, config_.net.channel, fading_rng_);
  const auto rates = compute_rates(decision_.e, decision_.eta, gains, config_.net);
  links_.clear();
  std::fill(budget_.begin(), budget_.end(), 0);
  for (int tx = 0; tx < n_; ++tx) {
    if (!active(tx)) continue;
    LinkRecord l;
    l.tx = tx;
    l.rx = partner(tx);
    l.rb = decision_.eta.rb_of(tx);
    const Vec2 a = pos[static_cast<std::size_t>(tx)], b = pos[static_cast<std::size_t>(l.rx)];
    l.los = classify_los(a, b, config_.world);
    if (l.rb >= 0) {
      l.gain_db = 10.0 * std::log10(gains.at(tx, l.rx, l.rb));
      const double i_w = interference_w(decision_.eta, gains, tx, l.rx, l.rb, config_.net);
      l.interference_dbm = i_w > 0.0 ? 10.0 * std::log10(i_w * 1e3) : -std::numeric_limits<double>::infinity();
    }
    l.rate = rates[static_cast<std::size_t>(tx)][static_cast<std::size_t>(l.rx)];
    l.budget = credit_.budget(tx, l.rx, l.rate);
    budget_[static_cast<std::size_t>(tx)] = l.budget;
    links_.push_back(l);
  }
  links_ready_ = true;
}

SlotOutcome Env::transmit(const std::vector<std::vector<int>>& selections) {
  if (!links_ready_) prepare_links();
  if (static_cast<int>(selections.size()) != n_) throw DimensionError("one selection per roster slot expected");
  SlotOutcome out;
  out.slot = slot_;
  out.reward.assign(static_cast<std::size_t>(n_), 0.0);
  const double t = now();
  const double mu = config_.sensing.mu;
  std::vector<std::vector<double>> f(static_cast<std::size_t>(n_), std::vector<double>(static_cast<std::size_t>(n_), 0.0));
  std::vector<std::vector<QuadBlock>> delivered(static_cast<std::size_t>(n_));

  for (auto& l : links_) {
    const auto utx = static_cast<std::size_t>(l.tx);
    const int valid = valid_candidates(l.tx);
    std::vector<int> sel;
    for (int idx : selections[utx])
      if (idx >= 0 && idx < valid && std::find(sel.begin(), sel.end(), idx) == sel.end()) sel.push_back(idx);
    std::sort(sel.begin(), sel.end());
    const auto got = truncate_delivery(sel, l.budget, delivery_rng_);
    auto& blocks = delivered[utx];
    for (int idx : got) blocks.push_back(candidates_[utx][static_cast<std::size_t>(idx)]);
    l.sent = static_cast<int>(sel.size());
    l.delivered = static_cast<int>(got.size());
    l.satisfaction = satisfaction(blocks, interest_[static_cast<std::size_t>(l.rx)], mu, t);
    l.reward = vehicle_reward(true, l.satisfaction, config_.reward_scale());
    f[static_cast<std::size_t>(l.rx)][utx] = l.satisfaction;
    out.reward[utx] = l.reward;
  }
  for (const auto& l : links_) {
    const auto& blocks = delivered[static_cast<std::size_t>(l.tx)];
    if (blocks.empty()) continue;
    const auto urx = static_cast<std::size_t>(l.rx);
    if (config_.fuse_received)
      for (const auto& b : blocks) fuse_block(maps_[urx], b, t, mu);
    inventories_[urx].apply_received(blocks, t, mu);
  }
  out.objective = objective(f);
  out.links = links_;
  links_ready_ = false;
  return out;
}

}  // namespace vcp
