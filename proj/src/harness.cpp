#include "vcp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "vcp/error.hpp"
#include "vcp/oracle.hpp"

namespace vcp {

namespace fs = std::filesystem;

rl::NetSpec vehicle_net_spec(const ExperimentConfig& c) {
  const int width = vehicle_observation_width(c.candidate_width());
  if (c.vehicle_head == VehicleHead::Flat)
    return rl::flat_spec(width, c.candidate_width(), c.vehicle_net.trunk, c.vehicle_net.branch_hidden,
                         c.flat_output_guard);
  return rl::branching_spec(width, c.candidate_width(), c.vehicle_net.trunk, c.vehicle_net.value_hidden,
                            c.vehicle_net.branch_hidden);
}

rl::NetSpec rsu_net_spec(const ExperimentConfig& c) {
  rl::NetSpec s;
  s.input = rsu_observation_width(c.world.n_max);
  s.trunk = c.rsu_net.trunk;
  s.value_hidden = c.rsu_net.value_hidden;
  s.branch_hidden = c.rsu_net.branch_hidden;
  s.branches = rsu_branch_sizes(c.world.n_max, c.net.rb_count);
  s.dueling = true;
  return s;
}

rl::TrainConfig planned_vehicle_train(const ExperimentConfig& c) {
  rl::TrainConfig t = c.vehicle_train;
  const double steps = static_cast<double>(c.episodes) * c.slots_per_episode();
  t.eps_decay_steps = std::max<long long>(1, std::llround(c.eps_decay_fraction * steps));
  return t;
}

rl::TrainConfig planned_rsu_train(const ExperimentConfig& c) {
  rl::TrainConfig t = c.rsu_train;
  const double steps = static_cast<double>(c.episodes) * c.episode_frames;
  t.eps_decay_steps = std::max<long long>(1, std::llround(c.eps_decay_fraction * steps));
  return t;
}

std::vector<int> vehicle_selection(const ExperimentConfig& c, std::span<const int> action, int valid_count) {
  if (c.vehicle_head == VehicleHead::Branching) return decode_vehicle_action(action, valid_count);
  if (action.size() != 1) throw DimensionError("flat head expects one joint action");
  std::vector<int> bits(static_cast<std::size_t>(c.candidate_width()));
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = (action[0] >> k) & 1;
  return decode_vehicle_action(bits, valid_count);
}

AgentSet AgentSet::create(const ExperimentConfig& c) {
  AgentSet a;
  const auto vs = vehicle_net_spec(c);
  const auto vt = planned_vehicle_train(c);
  for (int i = 0; i < c.world.n_max; ++i)
    a.vehicles.emplace_back(vs, vt, mix_seed(c.seed, 10, static_cast<std::uint64_t>(i)));
  a.rsu = rl::Learner(rsu_net_spec(c), planned_rsu_train(c), mix_seed(c.seed, 11));
  return a;
}

void AgentSet::save(const std::string& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint directory " + dir);
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    vehicles[i].save((fs::path(dir) / ("vehicle_" + std::to_string(i) + ".bdq")).string());
  rsu.save((fs::path(dir) / "rsu.bdq").string());
}

void AgentSet::load(const std::string& dir) {
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    vehicles[i].load((fs::path(dir) / ("vehicle_" + std::to_string(i) + ".bdq")).string());
  rsu.load((fs::path(dir) / "rsu.bdq").string());
}

EvalMode parse_eval_mode(const std::string& s) {
  if (s == "trained") return EvalMode::Trained;
  if (s == "random") return EvalMode::Random;
  if (s == "oracle") return EvalMode::Oracle;
  throw ConfigError("eval mode must be trained, random or oracle");
}

const char* to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Trained: return "trained";
    case EvalMode::Random: return "random";
    case EvalMode::Oracle: return "oracle";
  }
  return "?";
}

void write_metrics_header(std::ostream& out) {
  out << "episode,frame,slot,agent,reward,epsilon,loss,rate,delivered,objective,steps\n";
}

void write_metrics_row(std::ostream& out, const MetricsRow& r) {
  out << r.episode << ',' << r.frame << ',' << r.slot << ',' << r.agent << ',' << r.reward << ',' << r.epsilon << ','
      << r.loss << ',' << r.rate << ',' << r.delivered << ',' << r.objective << ',' << r.steps << '\n';
}

namespace {

// Larger candidate lists use the sorted selection, which reaches the same value.
constexpr int kEnumerateUpTo = 12;

std::vector<int> uniform_action(const std::vector<int>& sizes, Rng& rng) {
  std::vector<int> a;
  a.reserve(sizes.size());
  for (int s : sizes) a.push_back(std::uniform_int_distribution<int>(0, s - 1)(rng));
  return a;
}

std::ofstream open_csv(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << std::setprecision(10);
  return out;
}

std::string vname(int i) { return "v" + std::to_string(i); }

struct Rollout {
  double reward = 0.0, oracle = 0.0, rate = 0.0, budget = 0.0, objective = 0.0, rsu = 0.0;
  long long links = 0;
  int slots = 0, frames = 0;
  std::vector<double> rewards, oracle_rewards;
};

// Greedy (trained), uniform (random) or full-knowledge (oracle) play for `frames`
// frames from the current env slot.
void play_frames(Env& env, int frames, EvalMode mode, const AgentSet* agents, Rng& rng, const EvalSinks& sinks,
                 Rollout& acc) {
  const auto& c = env.config();
  const int n = env.roster_size();
  const auto rsu_sizes = rsu_branch_sizes(n, c.net.rb_count);
  const double scale = c.reward_scale();
  const bool learned_rsu = agents && c.rsu_policy == RsuPolicy::Learned && mode != EvalMode::Random;
  const bool learned_vehicles = agents && mode == EvalMode::Trained;
  if (mode == EvalMode::Trained && !agents) throw ConfigError("trained evaluation needs agents");

  for (int z = 0; z < frames; ++z) {
    if (env.slot() + c.frame_slots >= env.trace().slot_count()) break;
    env.begin_frame();
    const auto so = env.rsu_observation();
    const auto ra = learned_rsu ? agents->rsu.act_greedy(so) : uniform_action(rsu_sizes, rng);
    env.set_decision(decode_rsu_action(ra, n, c.net.rb_count));
    std::vector<std::vector<double>> frame_rewards(static_cast<std::size_t>(n));
    for (int x = 0; x < c.frame_slots; ++x) {
      env.sense();
      env.prepare_links();
      std::vector<std::vector<int>> sel(static_cast<std::size_t>(n));
      std::vector<double> cf(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        if (!env.active(i)) continue;
        const int valid = env.valid_candidates(i);
        const auto& cand = env.candidates(i);
        std::vector<double> contrib;
        contrib.reserve(static_cast<std::size_t>(valid));
        for (int k = 0; k < valid; ++k)
          contrib.push_back(block_satisfaction(cand[static_cast<std::size_t>(k)], env.interest(env.partner(i)),
                                               c.sensing.mu, env.now()));
        const BlockSelection best = best_blocks(contrib, env.budget(i), kEnumerateUpTo);
        cf[static_cast<std::size_t>(i)] = best.value * scale;
        auto& s = sel[static_cast<std::size_t>(i)];
        if (mode == EvalMode::Oracle) {
          s = best.indices;
        } else if (learned_vehicles) {
          const auto obs = env.vehicle_observation(i);
          s = vehicle_selection(c, agents->vehicles[static_cast<std::size_t>(i)].act_greedy(obs), valid);
        } else {
          for (int k = 0; k < valid; ++k)
            if (std::bernoulli_distribution(0.5)(rng)) s.push_back(k);
        }
      }
      const SlotOutcome out = env.transmit(sel);
      for (const auto& l : out.links) {
        acc.reward += l.reward;
        acc.oracle += cf[static_cast<std::size_t>(l.tx)];
        acc.rate += l.rate;
        acc.budget += l.budget;
        acc.rewards.push_back(l.reward);
        acc.oracle_rewards.push_back(cf[static_cast<std::size_t>(l.tx)]);
        ++acc.links;
        if (sinks.rewards)
          *sinks.rewards << out.slot << ',' << vname(l.tx) << ',' << l.reward << ',' << cf[static_cast<std::size_t>(l.tx)]
                         << '\n';
        if (sinks.satisfaction)
          *sinks.satisfaction << out.slot << ',' << l.rx << ',' << l.tx << ',' << l.satisfaction << ',' << l.sent << ','
                              << l.delivered << '\n';
        if (sinks.channel)
          *sinks.channel << out.slot << ',' << l.tx << ',' << l.rx << ',' << l.rb << ',' << to_string(l.los) << ','
                         << l.gain_db << ',' << l.interference_dbm << ',' << l.rate << '\n';
      }
      for (int i = 0; i < n; ++i)
        if (env.present(i)) frame_rewards[static_cast<std::size_t>(i)].push_back(out.reward[static_cast<std::size_t>(i)]);
      acc.objective += out.objective;
      ++acc.slots;
      env.advance();
    }
    acc.rsu += rsu_reward(frame_rewards);
    ++acc.frames;
  }
}

}  // namespace

EvalReport evaluate(const ExperimentConfig& config, const MobilityTrace& trace, EvalMode mode, const AgentSet* agents,
                    int slots, std::uint64_t seed, const EvalSinks& sinks) {
  ExperimentConfig c = config;
  if (mode == EvalMode::Oracle) c.net.channel.fading = false;
  validate(c);
  if (sinks.rewards) *sinks.rewards << "slot,agent,reward,oracle_reward\n";
  if (sinks.satisfaction) *sinks.satisfaction << "slot,n,n_prime,f,blocks_sent,blocks_delivered\n";
  if (sinks.channel) *sinks.channel << "slot,n,n_prime,k,class,h_db,i_dbm,rate\n";
  Env env(c, trace, seed);
  Rng rng = make_stream(seed, 40);
  Rollout acc;
  const int end = std::min(slots, trace.slot_count() - 1);
  for (int start = 0; start + c.frame_slots < end; start += c.slots_per_episode()) {
    env.reset(start);
    play_frames(env, std::min(c.episode_frames, (end - start) / c.frame_slots), mode, agents, rng, sinks, acc);
  }

  EvalReport r;
  r.mode = mode;
  r.slots = acc.slots;
  r.links = acc.links;
  const double links = std::max<double>(1.0, static_cast<double>(acc.links));
  r.mean_reward = acc.reward / links;
  r.mean_oracle_reward = acc.oracle / links;
  r.mean_rate = acc.rate / links;
  r.mean_budget = acc.budget / links;
  r.mean_objective = acc.objective / std::max(1, acc.slots);
  r.mean_rsu_reward = acc.rsu / std::max(1, acc.frames);
  r.positive_fraction =
      static_cast<double>(std::count_if(acc.rewards.begin(), acc.rewards.end(), [](double v) { return v > 0.0; })) /
      links;
  r.rewards = std::move(acc.rewards);
  r.oracle_rewards = std::move(acc.oracle_rewards);
  return r;
}

EvalPoint evaluate_episodes(const ExperimentConfig& c, const MobilityTrace& trace, const AgentSet& agents,
                            const std::vector<int>& starts, std::uint64_t seed) {
  Env env(c, trace, seed);
  Rng rng = make_stream(seed, 41);
  Rollout acc;
  for (int s : starts) {
    env.reset(s);
    play_frames(env, c.episode_frames, EvalMode::Trained, &agents, rng, {}, acc);
  }
  EvalPoint p;
  p.vehicle_reward = acc.reward / std::max<double>(1.0, static_cast<double>(acc.links));
  p.rsu_reward = acc.rsu / std::max(1, acc.frames);
  p.objective = acc.objective / std::max(1, acc.slots);
  return p;
}

namespace {

struct Pending {
  bool live = false;
  int id = -1;
  std::vector<float> s;
  std::vector<int> a;
  float r = 0.0f;
};

struct VehicleTally {
  double reward = 0.0, rate = 0.0, objective = 0.0;
  int steps = 0, delivered = 0;
};

}  // namespace

TrainReport run_training(const ExperimentConfig& c, const MobilityTrace& trace, AgentSet& agents,
                         const std::string& out_dir) {
  validate(c);
  const int n = c.world.n_max;
  if (static_cast<int>(agents.vehicles.size()) != n) throw DimensionError("one vehicle agent per roster slot expected");
  Env env(c, trace, mix_seed(c.seed, 30));
  const int len = c.slots_per_episode();
  auto starts = env.episode_starts(len + 1, n);
  if (starts.empty()) starts = env.episode_starts(len + 1, 2);
  if (starts.empty()) throw ConfigError("trace has no episode window with two vehicles present throughout");

  Rng start_rng = make_stream(c.seed, 31);
  Rng policy_rng = make_stream(c.seed, 32);
  std::vector<int> eval_starts;
  {
    Rng r = make_stream(c.seed, 33);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    for (int e = 0; e < c.eval_episodes; ++e) eval_starts.push_back(starts[pick(r)]);
  }
  const auto rsu_sizes = rsu_branch_sizes(n, c.net.rb_count);
  const bool learned_rsu = c.rsu_policy == RsuPolicy::Learned;
  const bool step_rows = c.metrics_detail == MetricsDetail::Step;

  std::ofstream metrics, evals, fed;
  const bool write = !out_dir.empty();
  if (write) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);
    metrics = open_csv(fs::path(out_dir) / "metrics.csv");
    write_metrics_header(metrics);
    evals = open_csv(fs::path(out_dir) / "eval.csv");
    evals << "episode,vehicle_reward,rsu_reward,objective\n";
    fed = open_csv(fs::path(out_dir) / "fed_rounds.csv");
    fed << "frame,participants,spread_before,spread_after\n";
  }

  TrainReport report;
  long long frame_counter = 0;
  auto emit = [&](const MetricsRow& row) {
    ++report.metrics_rows;
    if (write) write_metrics_row(metrics, row);
  };

  for (int ep = 0; ep < c.episodes; ++ep) {
    env.reset(starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(start_rng)]);
    std::vector<Pending> pend(static_cast<std::size_t>(n));
    Pending rsu_pend;
    std::vector<VehicleTally> tally(static_cast<std::size_t>(n));
    double rsu_sum = 0.0, ep_reward = 0.0;
    long long ep_links = 0;

    auto complete_vehicles = [&]() {
      for (int i = 0; i < n; ++i) {
        auto& p = pend[static_cast<std::size_t>(i)];
        if (!p.live) continue;
        auto& learner = agents.vehicles[static_cast<std::size_t>(i)];
        if (env.present(i) && env.vehicle_id(i) == p.id) {
          const auto s2 = env.vehicle_observation(i);
          learner.observe(p.s, p.a, p.r, s2, false);
        } else {
          learner.observe(p.s, p.a, p.r, p.s, true);
        }
        ++report.vehicle_steps;
        p.live = false;
      }
    };

    for (int z = 0; z < c.episode_frames; ++z) {
      env.begin_frame();
      const auto so = env.rsu_observation();
      if (learned_rsu && rsu_pend.live) {
        agents.rsu.observe(rsu_pend.s, rsu_pend.a, rsu_pend.r, so, false);
        ++report.rsu_steps;
        rsu_pend.live = false;
      }
      const auto ra = learned_rsu ? agents.rsu.act(so) : uniform_action(rsu_sizes, policy_rng);
      env.set_decision(decode_rsu_action(ra, n, c.net.rb_count));
      std::vector<std::vector<double>> frame_rewards(static_cast<std::size_t>(n));

      for (int x = 0; x < c.frame_slots; ++x) {
        env.sense();
        complete_vehicles();
        std::vector<std::vector<int>> sel(static_cast<std::size_t>(n));
        std::vector<std::vector<float>> obs(static_cast<std::size_t>(n));
        std::vector<std::vector<int>> act(static_cast<std::size_t>(n));
        std::vector<double> eps(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
          if (!env.active(i)) continue;
          const auto ui = static_cast<std::size_t>(i);
          obs[ui] = env.vehicle_observation(i);
          eps[ui] = agents.vehicles[ui].epsilon();
          act[ui] = agents.vehicles[ui].act(obs[ui]);
          sel[ui] = vehicle_selection(c, act[ui], env.valid_candidates(i));
        }
        env.prepare_links();
        const SlotOutcome out = env.transmit(sel);
        for (const auto& l : out.links) {
          const auto ui = static_cast<std::size_t>(l.tx);
          auto& p = pend[ui];
          p.live = true;
          p.id = env.vehicle_id(l.tx);
          p.s = std::move(obs[ui]);
          p.a = act[ui];
          p.r = static_cast<float>(l.reward);
          auto& t = tally[ui];
          t.reward += l.reward;
          t.rate += l.rate;
          t.delivered += l.delivered;
          t.objective += out.objective;
          ++t.steps;
          ep_reward += l.reward;
          ++ep_links;
          if (step_rows) {
            const auto& lr = agents.vehicles[ui];
            emit({ep, z, x, vname(l.tx), l.reward, eps[ui], lr.last_loss(), l.rate, l.delivered, out.objective,
                  lr.steps()});
          }
        }
        for (int i = 0; i < n; ++i)
          if (env.present(i))
            frame_rewards[static_cast<std::size_t>(i)].push_back(out.reward[static_cast<std::size_t>(i)]);
        env.advance();
      }

      const double r_rsu = rsu_reward(frame_rewards);
      rsu_sum += r_rsu;
      if (learned_rsu) {
        rsu_pend.live = true;
        rsu_pend.s = so;
        rsu_pend.a = ra;
        rsu_pend.r = static_cast<float>(r_rsu);
      }
      if (step_rows)
        emit({ep, z, -1, "rsu", r_rsu, learned_rsu ? agents.rsu.epsilon() : 1.0, agents.rsu.last_loss(), 0.0, 0, 0.0,
              agents.rsu.steps()});

      ++frame_counter;
      if (c.fed.enabled && frame_counter % c.fed.period_frames == 0) {
        std::vector<int> who;
        std::vector<std::vector<float>> models;
        for (int i = 0; i < n; ++i) {
          if (!env.present(i)) continue;
          who.push_back(i);
          const auto& p = agents.vehicles[static_cast<std::size_t>(i)].online().params();
          models.emplace_back(p.begin(), p.end());
        }
        if (!models.empty()) {
          FedRound round;
          round.frame = frame_counter;
          round.participants = static_cast<int>(who.size());
          round.spread_before = l2_spread(models);
          const auto global = aggregate(models);
          // Absent slots get the broadcast too, so a vehicle entering one starts from the global model.
          for (auto& l : agents.vehicles) l.set_params(global);
          for (auto& m : models) m = global;
          round.spread_after = l2_spread(models);
          report.fed_rounds.push_back(round);
          if (write)
            fed << round.frame << ',' << round.participants << ',' << round.spread_before << ',' << round.spread_after
                << '\n';
        }
      }
    }

    // Bootstrap observations from the slot after the episode.
    env.begin_frame();
    env.sense();
    complete_vehicles();
    if (learned_rsu && rsu_pend.live) {
      agents.rsu.observe(rsu_pend.s, rsu_pend.a, rsu_pend.r, env.rsu_observation(), false);
      ++report.rsu_steps;
    }

    report.episode_reward.push_back(ep_links > 0 ? ep_reward / static_cast<double>(ep_links) : 0.0);
    if (!step_rows) {
      for (int i = 0; i < n; ++i) {
        const auto& t = tally[static_cast<std::size_t>(i)];
        if (t.steps == 0) continue;
        const auto& lr = agents.vehicles[static_cast<std::size_t>(i)];
        emit({ep, -1, -1, vname(i), t.reward / t.steps, lr.epsilon(), lr.last_loss(), t.rate / t.steps, t.delivered,
              t.objective / t.steps, lr.steps()});
      }
      emit({ep, -1, -1, "rsu", rsu_sum / c.episode_frames, learned_rsu ? agents.rsu.epsilon() : 1.0,
            agents.rsu.last_loss(), 0.0, 0, 0.0, agents.rsu.steps()});
    }
    if (write) {
      metrics.flush();
      fed.flush();
    }

    if (c.eval_period > 0 && (ep + 1) % c.eval_period == 0) {
      EvalPoint p = evaluate_episodes(c, trace, agents, eval_starts, mix_seed(c.seed, 34));
      p.episode = ep + 1;
      report.evals.push_back(p);
      if (write) {
        evals << p.episode << ',' << p.vehicle_reward << ',' << p.rsu_reward << ',' << p.objective << '\n';
        evals.flush();
      }
    }
    if (write && c.checkpoint_period > 0 && (ep + 1) % c.checkpoint_period == 0)
      agents.save((fs::path(out_dir) / "checkpoints" / ("ep_" + std::to_string(ep + 1))).string());
  }
  if (write) agents.save((fs::path(out_dir) / "checkpoints").string());
  return report;
}

std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples, double max_value, int points) {
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  const int m = std::max(points, 2);
  for (int k = 0; k < m; ++k) {
    const double t = max_value * k / (m - 1);
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.emplace_back(t, sorted.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(sorted.size()));
  }
  return out;
}

void write_eval_summary(std::ostream& out, const EvalReport& r) {
  out << "mode,slots,links,mean_reward,mean_oracle_reward,positive_fraction,mean_rate,mean_budget,mean_objective,"
         "mean_rsu_reward\n";
  out << to_string(r.mode) << ',' << r.slots << ',' << r.links << ',' << r.mean_reward << ',' << r.mean_oracle_reward
      << ',' << r.positive_fraction << ',' << r.mean_rate << ',' << r.mean_budget << ',' << r.mean_objective << ','
      << r.mean_rsu_reward << '\n';
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  if (window < 1) throw ConfigError("smoothing window must be at least 1");
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    if (i >= static_cast<std::size_t>(window)) sum -= v[i - static_cast<std::size_t>(window)];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, static_cast<std::size_t>(window)));
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void export_plotdata(std::istream& in, std::ostream& out, int window) {
  if (window < 1) throw ConfigError("smoothing window must be at least 1");
  std::string line;
  if (!std::getline(in, line) || line.rfind("episode,frame,slot,agent,reward", 0) != 0)
    throw IoError("metrics file lacks the expected header");
  std::map<int, std::vector<double>> per_episode;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& s : f) std::getline(ss, s, ',');
    if (f[1] != "-1" || f[3].empty() || f[3][0] != 'v') continue;
    per_episode[std::stoi(f[0])].push_back(std::stod(f[4]));
  }
  std::vector<int> eps;
  std::vector<double> mean, lo, hi;
  for (const auto& [e, v] : per_episode) {
    eps.push_back(e);
    double s = 0.0;
    for (double x : v) s += x;
    mean.push_back(s / static_cast<double>(v.size()));
    lo.push_back(quantile(v, 0.05));
    hi.push_back(quantile(v, 0.95));
  }
  const auto sm = moving_average(mean, window), slo = moving_average(lo, window), shi = moving_average(hi, window);
  out << std::setprecision(10) << "episode,mean,smoothed,p05,p95,smoothed_p05,smoothed_p95\n";
  for (std::size_t i = 0; i < eps.size(); ++i)
    out << eps[i] << ',' << mean[i] << ',' << sm[i] << ',' << lo[i] << ',' << hi[i] << ',' << slo[i] << ',' << shi[i]
        << '\n';
}

MobilityTrace training_trace(const ExperimentConfig& c) {
  if (!c.trace_file.empty()) {
    std::ifstream in(c.trace_file);
    if (!in) throw IoError("cannot read trace " + c.trace_file);
    return MobilityTrace::read_csv(in, c.world);
  }
  return generate_trace(c.world, c.trace_vehicles, c.world.seed, c.trace_slots);
}

MobilityTrace evaluation_trace(const ExperimentConfig& c) {
  return generate_trace(c.world, c.trace_vehicles, c.eval_seed, c.eval_trace_slots);
}

}  // namespace vcp
