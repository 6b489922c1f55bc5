// Acceptance suite: one pass/fail line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradcheck.hpp"
#include "vcp/agents.hpp"
#include "vcp/channel.hpp"
#include "vcp/config.hpp"
#include "vcp/error.hpp"
#include "vcp/federation.hpp"
#include "vcp/harness.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/rl.hpp"
#include "vcp/satisfaction.hpp"
#include "vcp/sensing.hpp"
#include "vcp/world.hpp"

namespace fs = std::filesystem;
using namespace vcp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects named checks; the first few failures end up in the detail line.
class Tally {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    ++count_;
    if (!(std::abs(got - want) <= tol)) fail(what + " got " + fmt(got) + " want " + fmt(want));
  }
  void truth(const std::string& what, bool ok) {
    ++count_;
    if (!ok) fail(what);
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_.empty()) return {true, summary + " (" + std::to_string(count_) + " checks)"};
    std::string d = std::to_string(failures_.size()) + "/" + std::to_string(count_) + " failed:";
    for (std::size_t i = 0; i < std::min<std::size_t>(failures_.size(), 4); ++i) d += " [" + failures_[i] + "]";
    return {false, d};
  }

  static std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
  }

 private:
  void fail(std::string s) { failures_.push_back(std::move(s)); }
  int count_ = 0;
  std::vector<std::string> failures_;
};

std::string fmt(double v, int p = 4) {
  std::ostringstream s;
  s.precision(p);
  s << v;
  return s.str();
}

double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

VehicleState vehicle_at(Vec2 p, double speed, double heading) {
  VehicleState v;
  v.position = p;
  v.speed = speed;
  v.heading = heading;
  return v;
}

// ---------------------------------------------------------------------------
// 1. Formula goldens

Outcome formula_goldens() {
  Tally t;
  const double exact = 1e-9, accum = 1e-6;

  t.near("occupancy s+ 0.9", occupancy_probability(CellState::Occupied, 0.9), 0.9, exact);
  t.near("occupancy s0", occupancy_probability(CellState::Unknown, 0.7), 0.5, exact);
  t.near("occupancy s- 1.0", occupancy_probability(CellState::Unoccupied, 1.0), 0.0, exact);

  t.near("value p=0.5", cell_value(0.5, 3.0, 0.9), 0.0, exact);
  t.near("value fresh", cell_value(1.0, 0.0, 0.9), 1.0, exact);
  t.near("value 2 s", cell_value(1.0, 2.0, 0.9), 0.81, exact);

  const auto v = vehicle_at({50, 50}, 10, 0.0);
  t.near("roi own cell", roi_weight(v, {50, 50}, 2.0), 1.0, exact);
  t.near("roi on heading", roi_weight(v, {60, 50}, 2.0), 0.5, exact);
  const auto o = vehicle_at({0, 0}, 8, 0.0);
  t.near("roi off axis", roi_weight(o, {3, 4}, 2.0), (8 * 2.0 * 0.6 - 5.0) / (8 * 2.0 * 0.6), exact);
  t.near("roi behind", roi_weight(v, {45, 50}, 2.0), 0.0, exact);

  t.near("interest w=1 q=1", modified_interest(1.0, 1.0), 0.0, exact);
  t.near("interest w=0 q=0", modified_interest(0.0, 0.0), 0.0, exact);
  t.near("interest 0.5/0.19", modified_interest(0.5, 0.19), 0.405, exact);

  {
    NetConfig net;
    net.rb_count = 4;
    Association e(2);
    e.pair(0, 1);
    RbAllocation eta(2, 4);
    eta.at(0, 1, 0) = eta.at(1, 0, 2) = 1;
    const double h = 3e-8;
    GainTensor g(2, 4, h);
    const double snr = dbm_to_w(net.tx_power_dbm) * h / (dbm_to_w(net.noise_density_dbm_hz) * net.rb_bandwidth_hz);
    const double want = net.slot_s / net.block_bits * net.rb_bandwidth_hz * std::log2(1.0 + snr);
    t.near("rate single pair", compute_rates(e, eta, g, net)[0][1], want, exact * want);
    t.truth("rate unassociated", compute_rates(Association(2), RbAllocation(2, 4), g, net)[0][1] == 0.0);
    const double se = std::pow(2.0, 2.22) - 1.0;
    GainTensor g2(2, 4, se * dbm_to_w(net.noise_density_dbm_hz) * net.rb_bandwidth_hz / dbm_to_w(net.tx_power_dbm));
    t.near("rate unit sanity", compute_rates(e, eta, g2, net)[0][1], 1.0 * (0.002 * 180000 * 2.22 / 800), exact);
    ChannelParams p;
    p.fading = false;
    t.near("pathloss LOS 10 m", pathloss_db(LosClass::Los, 10.0, 0.0, p), 38.77 + 16.7, exact);
    t.near("pathloss NLOS", pathloss_db(LosClass::Nlos, 10.0, 12.0, p), 38.77 + 16.7 + 15.0 + 4.8, exact);
  }

  {
    std::vector<CellState> cells(16, CellState::Unoccupied);
    t.truth("block all free", block_state(cells) == CellState::Unoccupied);
    cells[3] = CellState::Unknown;
    t.truth("block unknown", block_state(cells) == CellState::Unknown);
    cells[9] = CellState::Occupied;
    t.truth("block occupied", block_state(cells) == CellState::Occupied);
    QuadBlock b;
    b.state = CellState::Occupied;
    b.sensed_at = 1.0;
    t.near("block value fresh", block_value(b, 0.9, 1.0), 1.0, exact);
    t.near("block value aged", block_value(b, 0.9, 3.0), 0.81, exact);
  }

  {
    const double cell = 0.5;
    Grid2D<double> ones(4, 4, 0.0);
    ones.at(1, 1) = 1.0;
    const InterestField f(0, 0, ones);
    QuadBlock b;
    b.state = CellState::Occupied;
    b.world_ix = b.world_iy = 1;
    b.world_side = 1;
    b.cell_m = cell;
    b.sensed_at = 0.0;
    t.near("satisfaction 1/A", satisfaction(std::vector<QuadBlock>{b}, f, 0.9, 0.0), 1.0 / (cell * cell), exact);
    t.near("satisfaction empty", satisfaction({}, f, 0.9, 0.0), 0.0, exact);
    Grid2D<double> uniform(4, 4, 0.3);
    const InterestField u(0, 0, uniform);
    QuadBlock coarse = b;
    coarse.world_ix = coarse.world_iy = 0;
    coarse.world_side = 4;
    double fine = 0.0;
    for (int k = 0; k < 4; ++k) {
      QuadBlock c = coarse;
      c.world_side = 2;
      c.world_ix = 2 * (k % 2);
      c.world_iy = 2 * (k / 2);
      fine += block_satisfaction(c, u, 0.9, 0.0);
    }
    t.near("coarse = mean of fine", block_satisfaction(coarse, u, 0.9, 0.0), fine / 4.0, exact);
    t.near("objective symmetric", objective({{0, 2}, {2, 0}}), 4.0, exact);
    t.near("objective one-sided", objective({{0, 2}, {0, 0}}), 0.0, exact);
  }

  {
    Rng rng(3);
    rl::NetSpec s;
    s.input = 6;
    s.trunk = {10, 8};
    s.value_hidden = 5;
    s.branch_hidden = 4;
    s.branches = {2, 3, 4};
    rl::BranchNet<double> net(s);
    net.init(rng, 1.0);
    rl::RowMat<double> x(3, 6);
    std::normal_distribution<double> nd;
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
    rl::ForwardCache<double> c;
    net.forward(x, c);
    double worst = 0.0;
    for (std::size_t b = 0; b < c.q.size(); ++b)
      for (Eigen::Index r = 0; r < 3; ++r) worst = std::max(worst, std::abs(c.q[b].row(r).mean() - c.value(r, 0)));
    t.near("branch mean equals V", worst, 0.0, accum);

    rl::BranchNet<double> zero(s);
    rl::ForwardCache<double> zc;
    zero.forward(x, zc);
    t.truth("zero net gives zero Q", zc.q[0].isZero(0.0) && zc.q[2].isZero(0.0));

    const std::vector<double> r{0.5, -1.0, 2.0};
    const std::vector<std::uint8_t> live{0, 0, 0}, done{1, 1, 1};
    const auto y0 = rl::td_targets<double>(net, net, x, r, live, 0.0);
    const auto yt = rl::td_targets<double>(net, net, x, r, done, 0.99);
    for (int i = 0; i < 3; ++i) {
      t.near("td gamma 0", y0[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i)], exact);
      t.near("td terminal", yt[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i)], exact);
    }
    // Independent double-Q target for one sample.
    const auto y = rl::td_targets<double>(net, zero, x, r, live, 0.9);
    t.near("td zero target net", y[1], r[1], exact);

    rl::NetSpec lin;
    lin.input = 2;
    lin.trunk = {};
    lin.value_hidden = 0;
    lin.branch_hidden = 0;
    lin.branches = {2};
    lin.dueling = false;
    rl::BranchNet<double> l(lin);
    l.params() = {1, 2, 3, 4, 0.5, -0.5};
    rl::RowMat<double> xi(1, 2);
    xi << 1.0, -1.0;
    rl::ForwardCache<double> lc;
    l.forward(xi, lc);
    std::vector<rl::RowMat<double>> dq;
    const std::vector<int> a{1};
    const std::vector<double> yy{0.5};
    t.near("branched loss", rl::branched_loss<double>(lc, a, yy, dq), 4.0, exact);
    const std::vector<double> yq{lc.q[0](0, 1)};
    t.near("loss at target", rl::branched_loss<double>(lc, a, yq, dq), 0.0, exact);
  }
  return t.outcome("closed-form goldens");
}

// ---------------------------------------------------------------------------
// 2. Gradient check

Outcome gradient_check() {
  double worst = 0.0;
  int checked = 0, largest = 0;
  for (int probe = 0; probe < 100; ++probe) {
    Rng rng(1000 + probe);
    rl::NetSpec s;
    s.input = 6 + probe % 5;
    s.trunk = {16, 12};
    s.value_hidden = 8;
    s.branch_hidden = 6;
    s.branches = {2, 3, 2, 4};
    s.dueling = true;
    rl::BranchNet<double> net(s);
    largest = std::max(largest, static_cast<int>(net.param_count()));
    net.init(rng, 1.0);
    const int rows = 4;
    rl::RowMat<double> x(rows, s.input);
    std::normal_distribution<double> nd;
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
    std::vector<int> a;
    for (int r = 0; r < rows; ++r)
      for (int j : s.branches) a.push_back(std::uniform_int_distribution<int>(0, j - 1)(rng));
    std::vector<double> y;
    for (int r = 0; r < rows; ++r) y.push_back(nd(rng));
    const auto res = oracle_check::finite_difference_check(net, x, a, y);
    worst = std::max(worst, res.max_rel_error);
    checked += res.checked;
  }
  const bool ok = worst < 1e-4 && largest <= 3000 && checked > 0;
  return {ok, "max rel error " + fmt(worst, 3) + " over 100 probes, " + std::to_string(checked) +
                  " parameters checked, nets of " + std::to_string(largest) + " params"};
}

// ---------------------------------------------------------------------------
// 3. Pairing bijection

std::vector<std::vector<int>> odometer(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(sizes.size(), 0);
  while (true) {
    out.push_back(a);
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == sizes[i]) a[i++] = 0;
    if (i == a.size()) break;
  }
  return out;
}

Outcome pairing_bijection() {
  Tally t;
  const std::pair<int, long long> want[] = {{2, 1}, {4, 3}, {6, 15}};
  for (auto [n, count] : want) {
    std::set<std::vector<std::pair<int, int>>> seen;
    bool perfect = true;
    for (const auto& a : odometer(pairing_branch_sizes(n))) {
      const auto p = pairs_of(decode_pairing(a, n));
      std::set<int> m;
      for (auto [x, y] : p) m.insert(x), m.insert(y);
      perfect = perfect && static_cast<int>(m.size()) == n && static_cast<int>(p.size()) == n / 2;
      seen.insert(p);
    }
    t.truth("N=" + std::to_string(n) + " perfect matchings", perfect);
    t.truth("N=" + std::to_string(n) + " distinct count " + std::to_string(seen.size()),
            static_cast<long long>(seen.size()) == count && pairing_count(n) == count);
  }
  const std::vector<int> first{0, 0, 0}, second{2, 1, 0};
  t.truth("worked example (1,1,1)",
          pairs_of(decode_pairing(first, 6)) == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}});
  t.truth("worked example (3,2,1)",
          pairs_of(decode_pairing(second, 6)) == std::vector<std::pair<int, int>>{{0, 3}, {1, 4}, {2, 5}});
  return t.outcome("counts 1, 3, 15 and both worked examples");
}

// ---------------------------------------------------------------------------
// 4. Quadtree losslessness

Outcome quadtree_lossless() {
  Rng rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> st(0, 2);
  int bad = 0, merged = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int level = rep % 6;
    const int n = 1 << level;
    Grid2D<CellState> g(n, n, CellState::Unoccupied);
    const double split = 0.3 + 0.7 * u(rng);
    auto fill = [&](auto&& self, int x, int y, int side) -> void {
      if (side == 1 || u(rng) > split) {
        const auto s = static_cast<CellState>(st(rng));
        for (int j = y; j < y + side; ++j)
          for (int i = x; i < x + side; ++i) g.at(i, j) = s;
        return;
      }
      const int h = side / 2;
      self(self, x, y, h), self(self, x + h, y, h), self(self, x, y + h, h), self(self, x + h, y + h, h);
    };
    fill(fill, 0, 0, n);
    const auto tree = QuadTree::decompose(g, level);
    const auto leaves = tree.leaves();
    bool ok = tree.recompose() == g && recompose(leaves, level) == g;
    ok = ok && static_cast<int>(leaves.size()) <= n * n;
    ok = ok && static_cast<int>(tree.candidates().size()) <= quadtree_candidate_cap(level);
    long long area = 0;
    for (const auto& b : leaves) {
      ok = ok && b.level >= 0 && b.level <= level && b.side == (1 << (level - b.level));
      area += static_cast<long long>(b.side) * b.side;
    }
    ok = ok && area == static_cast<long long>(n) * n;
    merged += static_cast<int>(leaves.size()) < n * n;
    bad += !ok;
  }
  return {bad == 0, std::to_string(1000 - bad) + "/1000 grids rebuilt exactly with leaf bounds (" +
                        std::to_string(merged) + " with merges)"};
}

// ---------------------------------------------------------------------------
// Training experiments

ExperimentConfig two_vehicle_config() {
  ExperimentConfig c = desk_config();
  c.world.n_max = 2;
  c.max_level = 2;
  c.max_past = 0;
  return c;
}

double final_smoothed(const std::vector<double>& v, int window) {
  if (v.empty()) return 0.0;
  return moving_average(v, window).back();
}

std::vector<double> eval_curve(const TrainReport& r) {
  std::vector<double> v;
  for (const auto& e : r.evals) v.push_back(e.vehicle_reward);
  return v;
}

// 5. BDQ vs flat DQN

Outcome bdq_vs_dqn() {
  auto c = two_vehicle_config();
  c.episodes = 2000;
  c.eval_period = 50;
  c.eval_episodes = 20;
  const auto trace = training_trace(c);

  auto bdq_cfg = c;
  bdq_cfg.vehicle_head = VehicleHead::Branching;
  auto bdq = AgentSet::create(bdq_cfg);
  const auto rb = run_training(bdq_cfg, trace, bdq);

  auto dqn_cfg = c;
  dqn_cfg.vehicle_head = VehicleHead::Flat;
  auto dqn = AgentSet::create(dqn_cfg);
  const auto rd = run_training(dqn_cfg, trace, dqn);

  const int window = 8;
  const double a = final_smoothed(eval_curve(rb), window), b = final_smoothed(eval_curve(rd), window);
  const double gap = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});

  const bool dqn_outputs = vehicle_net_spec(dqn_cfg).output_count() == 32;
  auto l3 = desk_config();
  l3.max_level = 3;
  l3.max_past = 0;
  const bool bdq_outputs = rl::branching_spec(10, quadtree_candidate_cap(3), {64}, 16, 16).output_count() == 43 &&
                           quadtree_candidate_cap(3) == 21;
  bool rejected = false;
  try {
    rl::flat_spec(10, 21, {64}, 16, l3.flat_output_guard);
  } catch (const GuardExceeded&) {
    rejected = true;
  }
  auto flat_l3 = l3;
  flat_l3.vehicle_head = VehicleHead::Flat;
  flat_l3.max_past = 0;
  bool config_rejected = false;
  try {
    validate(flat_l3);
  } catch (const GuardExceeded&) {
    config_rejected = true;
  }
  const bool ok = gap <= 0.10 && dqn_outputs && bdq_outputs && rejected && config_rejected;
  return {ok, "smoothed eval bdq " + fmt(a) + " dqn " + fmt(b) + " gap " + fmt(100 * gap, 3) +
                  "%; L=3 bdq outputs 43: " + (bdq_outputs ? "yes" : "no") +
                  "; flat 2^21 rejected: " + (rejected && config_rejected ? "yes" : "no")};
}

// 6. Trained vs random

Outcome trained_vs_random() {
  auto c = desk_config();
  c.episodes = 800;
  c.eval_period = 0;
  const auto trace = training_trace(c);
  auto agents = AgentSet::create(c);
  run_training(c, trace, agents);
  const auto held = evaluation_trace(c);
  const auto tr = evaluate(c, held, EvalMode::Trained, &agents, 20000, c.eval_seed);
  const auto rr = evaluate(c, held, EvalMode::Random, nullptr, 20000, c.eval_seed);
  const double gain = tr.mean_reward / std::max(rr.mean_reward, 1e-300) - 1.0;
  return {gain >= 0.25, "trained " + fmt(tr.mean_reward) + " random " + fmt(rr.mean_reward) + " gain " +
                            fmt(100 * gain, 3) + "% over " + std::to_string(tr.slots) + " slots"};
}

// 7. Trained vs oracle

Outcome trained_vs_oracle() {
  auto c = two_vehicle_config();
  c.net.channel.fading = false;
  c.episodes = 1500;
  c.eval_period = 0;
  const auto trace = training_trace(c);
  auto agents = AgentSet::create(c);
  run_training(c, trace, agents);
  const auto held = evaluation_trace(c);
  const auto tr = evaluate(c, held, EvalMode::Trained, &agents, 20000, c.eval_seed);
  double top = 0.0;
  for (double v : tr.oracle_rewards) top = std::max(top, v);
  const auto a = ccdf(tr.rewards, top, 401), o = ccdf(tr.oracle_rewards, top, 401);
  bool dominates = true;
  for (std::size_t i = 0; i < a.size(); ++i) dominates = dominates && o[i].second >= a[i].second;
  bool slotwise = true;
  for (std::size_t i = 0; i < tr.rewards.size(); ++i) slotwise = slotwise && tr.oracle_rewards[i] + 1e-12 >= tr.rewards[i];
  const double frac = tr.mean_reward / std::max(tr.mean_oracle_reward, 1e-300);
  return {frac >= 0.70 && dominates && slotwise,
          "trained " + fmt(tr.mean_reward) + " oracle " + fmt(tr.mean_oracle_reward) + " ratio " + fmt(100 * frac, 3) +
              "%; CCDF dominance " + (dominates && slotwise ? "holds" : "violated")};
}

// 8. Federated vs non-federated

Outcome federated_speedup() {
  auto c = desk_config();
  c.episodes = 600;
  c.eval_period = 20;
  c.eval_episodes = 10;
  const int window = 5;
  std::vector<double> ratios;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    c.seed = seed;
    const auto trace = training_trace(c);
    auto plain_cfg = c;
    plain_cfg.fed.enabled = false;
    auto fed_cfg = c;
    fed_cfg.fed.enabled = true;
    auto pa = AgentSet::create(plain_cfg);
    const auto rp = run_training(plain_cfg, trace, pa);
    auto fa = AgentSet::create(fed_cfg);
    const auto rf = run_training(fed_cfg, trace, fa);
    const auto sp = moving_average(eval_curve(rp), window);
    const auto sf = moving_average(eval_curve(rf), window);
    const double target = sp.back();
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < sf.size(); ++e)
      if (sf[e] >= target) {
        ratio = static_cast<double>(rf.evals[e].episode) / static_cast<double>(c.episodes);
        break;
      }
    ratios.push_back(ratio);
    detail += " seed " + std::to_string(seed) + ": target " + fmt(target) + " at " +
              (std::isinf(ratio) ? std::string("never") : fmt(100 * ratio, 3) + "%");
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  return {median <= 0.80, "median episodes to reach the non-federated final smoothed eval reward " +
                              (std::isinf(median) ? std::string("never") : fmt(100 * median, 3) + "%") + ";" + detail};
}

// 9. FedAvg algebra

Outcome fedavg_algebra() {
  Tally t;
  Rng rng(9);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  std::vector<std::vector<float>> m(5, std::vector<float>(257));
  for (auto& v : m)
    for (auto& x : v) x = nd(rng);
  const auto avg = aggregate(m);
  const std::vector<std::vector<float>> same(4, avg);
  t.truth("idempotent", aggregate(same) == avg);
  auto shuffled = m;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto b = aggregate(shuffled);
  double worst = 0.0;
  for (std::size_t i = 0; i < avg.size(); ++i) worst = std::max(worst, static_cast<double>(std::abs(avg[i] - b[i])));
  t.near("permutation invariant", worst, 0.0, 1e-6);
  const std::vector<std::vector<float>> two{{1, 3}, {3, -1}};
  t.truth("midpoint", aggregate(two) == std::vector<float>{2, 1});
  double ref = 0.0;
  for (const auto& v : m) ref += static_cast<double>(v[7]);
  t.near("element mean", avg[7], ref / 5.0, 1e-6);

  auto c = desk_config();
  auto agents = AgentSet::create(c);
  std::vector<std::vector<float>> models;
  for (const auto& l : agents.vehicles) models.emplace_back(l.online().params().begin(), l.online().params().end());
  t.truth("distinct before", l2_spread(models) > 0.0);
  const auto g = aggregate(models);
  for (auto& l : agents.vehicles) l.set_params(g);
  std::vector<std::vector<float>> after;
  for (const auto& l : agents.vehicles) after.emplace_back(l.online().params().begin(), l.online().params().end());
  t.truth("consensus after broadcast", l2_spread(after) == 0.0 && after[0] == g);
  return t.outcome("idempotence, permutation invariance, consensus");
}

// 10. Determinism through the CLI

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "vcp_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "cfg.json");
    cfg << R"({"episodes": 4, "eval_period": 2, "eval_episodes": 2, "trace_slots": 2000, "warmup": 16, "batch": 8,)"
        << R"( "fed_enabled": true, "metrics_detail": "step", "seed": 11})";
  }
  std::string files[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = root / ("run" + std::to_string(k));
    const std::string cmd = "\"" + cli + "\" train -c \"" + (root / "cfg.json").string() + "\" -o \"" + out.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI train failed: " + cmd};
    files[k] = slurp(out / "metrics.csv") + slurp(out / "eval.csv") + slurp(out / "fed_rounds.csv");
  }
  const bool same = !files[0].empty() && files[0] == files[1];
  const auto bytes = files[0].size();
  fs::remove_all(root);
  return {same, std::string(same ? "identical" : "different") + " metrics/eval/fed_rounds CSVs across two CLI runs (" +
                    std::to_string(bytes) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcp acceptance suite"};
  std::vector<int> only;
  std::string cli = VCP_CLI_PATH;
  app.add_option("--only", only, "criteria to run (default all)");
  app.add_option("--cli", cli, "path to the vcp CLI");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "formula goldens", 1.0, formula_goldens},
      {2, "gradient check", 30.0, gradient_check},
      {3, "pairing bijection", 1.0, pairing_bijection},
      {4, "quadtree losslessness", 10.0, quadtree_lossless},
      {5, "BDQ vs flat DQN", 30 * 60.0, bdq_vs_dqn},
      {6, "trained vs random", 60 * 60.0, trained_vs_random},
      {7, "trained vs oracle", 20 * 60.0, trained_vs_oracle},
      {8, "federated vs non-federated", 2 * 3600.0, federated_speedup},
      {9, "FedAvg algebra", 1.0, fedavg_algebra},
      {10, "determinism", 60.0, [&] { return cli_determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d (%s): %s - %s [%.2f s, limit %.0f s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), s, c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
