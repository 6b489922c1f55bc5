#include "vcp/rl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "json.hpp"
#include "vcp/error.hpp"

namespace vcp::rl {

long long NetSpec::output_count() const {
  long long n = dueling ? 1 : 0;
  for (int j : branches) n += j;
  return n;
}

void validate(const NetSpec& spec) {
  if (spec.input <= 0) throw ConfigError("network input width must be positive");
  if (spec.branches.empty()) throw ConfigError("network needs at least one branch");
  for (int w : spec.trunk)
    if (w <= 0) throw ConfigError("trunk widths must be positive");
  for (int j : spec.branches)
    if (j < 1) throw ConfigError("every branch needs at least one sub-action");
  if (spec.value_hidden < 0 || spec.branch_hidden < 0) throw ConfigError("head widths must be non-negative");
}

NetSpec branching_spec(int input, int candidates, std::vector<int> trunk, int value_hidden, int branch_hidden) {
  NetSpec s;
  s.input = input;
  s.trunk = std::move(trunk);
  s.value_hidden = value_hidden;
  s.branch_hidden = branch_hidden;
  s.branches.assign(static_cast<std::size_t>(candidates), 2);
  s.dueling = true;
  return s;
}

NetSpec flat_spec(int input, int candidates, std::vector<int> trunk, int branch_hidden, long long max_outputs) {
  if (candidates >= 62 || (1LL << candidates) > max_outputs)
    throw GuardExceeded("flat DQN with " + std::to_string(candidates) + " binary choices needs 2^" +
                        std::to_string(candidates) + " outputs, above the guard of " + std::to_string(max_outputs));
  NetSpec s;
  s.input = input;
  s.trunk = std::move(trunk);
  s.value_hidden = 0;
  s.branch_hidden = branch_hidden;
  s.branches = {1 << candidates};
  s.dueling = false;
  return s;
}

// ---------------------------------------------------------------------------

template <typename S>
BranchNet<S>::BranchNet(NetSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  std::size_t offset = 0;
  auto add = [&](int out, int in) {
    layers_.push_back({out, in, offset});
    offset += layers_.back().size();
  };
  int width = spec_.input;
  for (int w : spec_.trunk) {
    add(w, width);
    width = w;
  }
  const int trunk_out = width;
  if (spec_.dueling) {
    if (spec_.value_hidden > 0) {
      add(spec_.value_hidden, trunk_out);
      add(1, spec_.value_hidden);
    } else {
      add(1, trunk_out);
    }
  }
  const int j = spec_.branch_count();
  if (spec_.branch_hidden > 0) add(spec_.branch_hidden * j, trunk_out);
  for (int b : spec_.branches) add(b, spec_.branch_hidden > 0 ? spec_.branch_hidden : trunk_out);
  params_.assign(offset, S(0));
}

template <typename S>
int BranchNet<S>::value_hidden_layer() const {
  return spec_.dueling && spec_.value_hidden > 0 ? static_cast<int>(spec_.trunk.size()) : -1;
}

template <typename S>
int BranchNet<S>::value_out_layer() const {
  if (!spec_.dueling) return -1;
  return static_cast<int>(spec_.trunk.size()) + (spec_.value_hidden > 0 ? 1 : 0);
}

template <typename S>
int BranchNet<S>::branch_hidden_layer() const {
  if (spec_.branch_hidden <= 0) return -1;
  return static_cast<int>(spec_.trunk.size()) + (spec_.dueling ? (spec_.value_hidden > 0 ? 2 : 1) : 0);
}

template <typename S>
int BranchNet<S>::head_layer(int branch) const {
  return static_cast<int>(layers_.size()) - spec_.branch_count() + branch;
}

template <typename S>
Eigen::Map<const RowMat<S>> BranchNet<S>::weight(int layer) const {
  const auto& l = layers_[static_cast<std::size_t>(layer)];
  return Eigen::Map<const RowMat<S>>(params_.data() + l.offset, l.out, l.in);
}

template <typename S>
Eigen::Map<const Eigen::Matrix<S, 1, Eigen::Dynamic>> BranchNet<S>::bias(int layer) const {
  const auto& l = layers_[static_cast<std::size_t>(layer)];
  return Eigen::Map<const Eigen::Matrix<S, 1, Eigen::Dynamic>>(
      params_.data() + l.offset + static_cast<std::size_t>(l.out) * static_cast<std::size_t>(l.in), l.out);
}

template <typename S>
void BranchNet<S>::init(Rng& rng, double head_scale) {
  std::fill(params_.begin(), params_.end(), S(0));
  const int first_head = head_layer(0);
  for (int i = 0; i < static_cast<int>(layers_.size()); ++i) {
    const auto& l = layers_[static_cast<std::size_t>(i)];
    double bound = std::sqrt(6.0 / l.in);
    if (i >= first_head || i == value_out_layer()) bound *= head_scale;
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t nw = static_cast<std::size_t>(l.out) * static_cast<std::size_t>(l.in);
    for (std::size_t k = 0; k < nw; ++k) params_[l.offset + k] = static_cast<S>(u(rng));
  }
}

namespace {

template <typename S>
RowMat<S> relu(const RowMat<S>& z) {
  return z.cwiseMax(S(0));
}

}  // namespace

template <typename S>
void BranchNet<S>::forward(const RowMat<S>& x, ForwardCache<S>& c) const {
  if (x.cols() != spec_.input) throw DimensionError("state width does not match the network input");
  c.input = x;
  const std::size_t nt = spec_.trunk.size();
  c.trunk_pre.resize(nt);
  c.trunk_act.resize(nt);
  const RowMat<S>* h = &c.input;
  for (std::size_t i = 0; i < nt; ++i) {
    const int li = static_cast<int>(i);
    c.trunk_pre[i] = (*h) * weight(li).transpose();
    c.trunk_pre[i].rowwise() += bias(li);
    c.trunk_act[i] = relu<S>(c.trunk_pre[i]);
    h = &c.trunk_act[i];
  }
  const RowMat<S>& trunk = *h;
  const int rows = static_cast<int>(x.rows());

  if (spec_.dueling) {
    const RowMat<S>* vin = &trunk;
    if (const int vh = value_hidden_layer(); vh >= 0) {
      c.value_pre = trunk * weight(vh).transpose();
      c.value_pre.rowwise() += bias(vh);
      c.value_act = relu<S>(c.value_pre);
      vin = &c.value_act;
    }
    const int vo = value_out_layer();
    c.value = (*vin) * weight(vo).transpose();
    c.value.rowwise() += bias(vo);
  }

  const int bh = branch_hidden_layer();
  if (bh >= 0) {
    c.branch_pre = trunk * weight(bh).transpose();
    c.branch_pre.rowwise() += bias(bh);
    c.branch_act = relu<S>(c.branch_pre);
  }
  const int nb = spec_.branch_count();
  c.adv.resize(static_cast<std::size_t>(nb));
  c.q.resize(static_cast<std::size_t>(nb));
  for (int b = 0; b < nb; ++b) {
    const int hl = head_layer(b);
    const auto ub = static_cast<std::size_t>(b);
    if (bh >= 0) {
      const int w = spec_.branch_hidden;
      c.adv[ub] = c.branch_act.middleCols(static_cast<Eigen::Index>(b) * w, w) * weight(hl).transpose();
    } else {
      c.adv[ub] = trunk * weight(hl).transpose();
    }
    c.adv[ub].rowwise() += bias(hl);
    if (spec_.dueling) {
      c.q[ub] = c.adv[ub];
      for (int r = 0; r < rows; ++r) {
        const S shift = c.value(r, 0) - c.adv[ub].row(r).mean();
        c.q[ub].row(r).array() += shift;
      }
    } else {
      c.q[ub] = c.adv[ub];
    }
  }
}

template <typename S>
void BranchNet<S>::backward(const ForwardCache<S>& c, const std::vector<RowMat<S>>& dq, ParamVector<S>& grad) const {
  grad.assign(params_.size(), S(0));
  auto gw = [&](int layer) {
    const auto& l = layers_[static_cast<std::size_t>(layer)];
    return Eigen::Map<RowMat<S>>(grad.data() + l.offset, l.out, l.in);
  };
  auto gb = [&](int layer) {
    const auto& l = layers_[static_cast<std::size_t>(layer)];
    return Eigen::Map<Eigen::Matrix<S, 1, Eigen::Dynamic>>(
        grad.data() + l.offset + static_cast<std::size_t>(l.out) * static_cast<std::size_t>(l.in), l.out);
  };
  const int nb = spec_.branch_count();
  const Eigen::Index rows = c.input.rows();
  const RowMat<S>& trunk = spec_.trunk.empty() ? c.input : c.trunk_act.back();
  RowMat<S> dtrunk = RowMat<S>::Zero(rows, trunk.cols());

  RowMat<S> dvalue;
  if (spec_.dueling) dvalue = RowMat<S>::Zero(rows, 1);
  const int bh = branch_hidden_layer();
  RowMat<S> dbranch;
  if (bh >= 0) dbranch = RowMat<S>::Zero(rows, c.branch_act.cols());

  for (int b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    RowMat<S> dadv = dq[ub];
    if (spec_.dueling) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const S total = dq[ub].row(r).sum();
        dvalue(r, 0) += total;
        dadv.row(r).array() -= total / static_cast<S>(dq[ub].cols());
      }
    }
    const int hl = head_layer(b);
    if (bh >= 0) {
      const int w = spec_.branch_hidden;
      const auto in = c.branch_act.middleCols(static_cast<Eigen::Index>(b) * w, w);
      gw(hl).noalias() += dadv.transpose() * in;
      dbranch.middleCols(static_cast<Eigen::Index>(b) * w, w).noalias() += dadv * weight(hl);
    } else {
      gw(hl).noalias() += dadv.transpose() * trunk;
      dtrunk.noalias() += dadv * weight(hl);
    }
    gb(hl) += dadv.colwise().sum();
  }

  if (bh >= 0) {
    RowMat<S> dz = dbranch.cwiseProduct((c.branch_pre.array() > S(0)).matrix().template cast<S>());
    gw(bh).noalias() += dz.transpose() * trunk;
    gb(bh) += dz.colwise().sum();
    dtrunk.noalias() += dz * weight(bh);
  }

  if (spec_.dueling) {
    const int vo = value_out_layer();
    const int vh = value_hidden_layer();
    const RowMat<S>& vin = vh >= 0 ? c.value_act : trunk;
    gw(vo).noalias() += dvalue.transpose() * vin;
    gb(vo) += dvalue.colwise().sum();
    if (vh >= 0) {
      RowMat<S> dz = (dvalue * weight(vo)).cwiseProduct((c.value_pre.array() > S(0)).matrix().template cast<S>());
      gw(vh).noalias() += dz.transpose() * trunk;
      gb(vh) += dz.colwise().sum();
      dtrunk.noalias() += dz * weight(vh);
    } else {
      dtrunk.noalias() += dvalue * weight(vo);
    }
  }

  for (int i = static_cast<int>(spec_.trunk.size()) - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    RowMat<S> dz = dtrunk.cwiseProduct((c.trunk_pre[ui].array() > S(0)).matrix().template cast<S>());
    const RowMat<S>& in = i == 0 ? c.input : c.trunk_act[ui - 1];
    gw(i).noalias() += dz.transpose() * in;
    gb(i) += dz.colwise().sum();
    if (i > 0) dtrunk = dz * weight(i);
  }
}

template <typename S>
std::vector<std::vector<S>> BranchNet<S>::q_values(std::span<const S> state) const {
  RowMat<S> x(1, static_cast<Eigen::Index>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) x(0, static_cast<Eigen::Index>(i)) = state[i];
  ForwardCache<S> c;
  forward(x, c);
  std::vector<std::vector<S>> out;
  for (const auto& q : c.q) out.emplace_back(q.data(), q.data() + q.size());
  return out;
}

template class BranchNet<float>;
template class BranchNet<double>;

// ---------------------------------------------------------------------------

template <typename S>
double branched_loss(const ForwardCache<S>& cache, std::span<const int> actions, std::span<const S> targets,
                     std::vector<RowMat<S>>& dq) {
  const std::size_t nb = cache.q.size();
  const Eigen::Index rows = cache.input.rows();
  if (actions.size() != static_cast<std::size_t>(rows) * nb || targets.size() != static_cast<std::size_t>(rows))
    throw DimensionError("batch shapes do not match the network");
  dq.resize(nb);
  double loss = 0.0;
  const double scale = 1.0 / (static_cast<double>(rows) * static_cast<double>(nb));
  for (std::size_t b = 0; b < nb; ++b) dq[b] = RowMat<S>::Zero(rows, cache.q[b].cols());
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t b = 0; b < nb; ++b) {
      const int a = actions[static_cast<std::size_t>(r) * nb + b];
      const double err = static_cast<double>(targets[static_cast<std::size_t>(r)]) - static_cast<double>(cache.q[b](r, a));
      loss += err * err * scale;
      dq[b](r, a) = static_cast<S>(-2.0 * err * scale);
    }
  }
  return loss;
}

template double branched_loss<float>(const ForwardCache<float>&, std::span<const int>, std::span<const float>,
                                     std::vector<RowMat<float>>&);
template double branched_loss<double>(const ForwardCache<double>&, std::span<const int>, std::span<const double>,
                                      std::vector<RowMat<double>>&);

template <typename S>
int argmax(std::span<const S> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
  return best;
}

template int argmax<float>(std::span<const float>);
template int argmax<double>(std::span<const double>);

template <typename S>
std::vector<S> td_targets(const BranchNet<S>& online, const BranchNet<S>& target, const RowMat<S>& next_states,
                          std::span<const S> rewards, std::span<const std::uint8_t> terminal, double gamma) {
  const Eigen::Index rows = next_states.rows();
  ForwardCache<S> on, tg;
  online.forward(next_states, on);
  target.forward(next_states, tg);
  const std::size_t nb = on.q.size();
  std::vector<S> y(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    double boot = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      Eigen::Index best = 0;
      on.q[b].row(r).maxCoeff(&best);
      // maxCoeff returns the first maximum, matching argmax().
      boot += static_cast<double>(tg.q[b](r, best));
    }
    boot /= static_cast<double>(nb);
    const auto i = static_cast<std::size_t>(r);
    const double done = terminal[i] ? 1.0 : 0.0;
    y[i] = static_cast<S>(static_cast<double>(rewards[i]) + gamma * (1.0 - done) * boot);
  }
  return y;
}

template std::vector<float> td_targets<float>(const BranchNet<float>&, const BranchNet<float>&, const RowMat<float>&,
                                              std::span<const float>, std::span<const std::uint8_t>, double);
template std::vector<double> td_targets<double>(const BranchNet<double>&, const BranchNet<double>&,
                                                const RowMat<double>&, std::span<const double>,
                                                std::span<const std::uint8_t>, double);

// ---------------------------------------------------------------------------

void Adam::step(std::span<float> params, std::span<const float> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) throw DimensionError("Adam shapes do not match");
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const auto b1 = static_cast<float>(config_.beta1), b2 = static_cast<float>(config_.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const float g = grad[i];
    m_[i] = b1 * m_[i] + (1.0f - b1) * g;
    v_[i] = b2 * v_[i] + (1.0f - b2) * g * g;
    const double mh = m_[i] / c1, vh = v_[i] / c2;
    params[i] -= static_cast<float>(config_.lr * mh / (std::sqrt(vh) + config_.eps));
  }
}

double clip_global_norm(std::span<float> grad, double max_norm) {
  double sq = 0.0;
  for (float g : grad) sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const auto s = static_cast<float>(max_norm / norm);
    for (float& g : grad) g *= s;
  }
  return norm;
}

double EpsilonSchedule::at(long long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return end;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return start + (end - start) * frac;
}

std::vector<int> greedy_action(const BranchNet<float>& net, std::span<const float> state) {
  const auto q = net.q_values(state);
  std::vector<int> a;
  a.reserve(q.size());
  for (const auto& row : q) a.push_back(argmax<float>(row));
  return a;
}

std::vector<int> act_epsilon_greedy(const BranchNet<float>& net, std::span<const float> state, double eps, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (eps > 0.0 && coin(rng) < eps) {
    std::vector<int> a;
    for (int j : net.spec().branches) a.push_back(std::uniform_int_distribution<int>(0, j - 1)(rng));
    return a;
  }
  return greedy_action(net, state);
}

// ---------------------------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int branches)
    : capacity_(capacity), dim_(state_dim), branches_(branches) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(std::span<const float> s, std::span<const int> a, float r, std::span<const float> s2,
                        bool terminal) {
  if (static_cast<int>(s.size()) != dim_ || static_cast<int>(s2.size()) != dim_ ||
      static_cast<int>(a.size()) != branches_)
    throw DimensionError("transition shape does not match the replay buffer");
  const auto d = static_cast<std::size_t>(dim_), j = static_cast<std::size_t>(branches_);
  if (size_ < capacity_) {
    s_.insert(s_.end(), s.begin(), s.end());
    s2_.insert(s2_.end(), s2.begin(), s2.end());
    a_.insert(a_.end(), a.begin(), a.end());
    r_.push_back(r);
    done_.push_back(terminal ? 1 : 0);
    ++size_;
    head_ = size_ % capacity_;
    return;
  }
  std::copy(s.begin(), s.end(), s_.begin() + static_cast<std::ptrdiff_t>(head_ * d));
  std::copy(s2.begin(), s2.end(), s2_.begin() + static_cast<std::ptrdiff_t>(head_ * d));
  std::copy(a.begin(), a.end(), a_.begin() + static_cast<std::ptrdiff_t>(head_ * j));
  r_[head_] = r;
  done_[head_] = terminal ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n > size_) throw RangeError("not enough transitions to sample a batch");
  // Floyd's algorithm, then sort for a deterministic gather order.
  std::vector<std::size_t> picked;
  std::unordered_set<std::size_t> seen;
  for (std::size_t k = size_ - n; k < size_; ++k) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, k)(rng);
    if (seen.insert(t).second) {
      picked.push_back(t);
    } else {
      seen.insert(k);
      picked.push_back(k);
    }
  }
  std::sort(picked.begin(), picked.end());
  Batch b;
  const auto rows = static_cast<Eigen::Index>(n);
  b.s.resize(rows, dim_);
  b.s2.resize(rows, dim_);
  b.a.resize(n * static_cast<std::size_t>(branches_));
  b.r.resize(n);
  b.terminal.resize(n);
  b.index = picked;
  const auto d = static_cast<std::size_t>(dim_), j = static_cast<std::size_t>(branches_);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = picked[i];
    std::memcpy(b.s.row(static_cast<Eigen::Index>(i)).data(), s_.data() + t * d, d * sizeof(float));
    std::memcpy(b.s2.row(static_cast<Eigen::Index>(i)).data(), s2_.data() + t * d, d * sizeof(float));
    std::copy_n(a_.begin() + static_cast<std::ptrdiff_t>(t * j), j, b.a.begin() + static_cast<std::ptrdiff_t>(i * j));
    b.r[i] = r_[t];
    b.terminal[i] = done_[t];
  }
  return b;
}

// ---------------------------------------------------------------------------

void validate(const TrainConfig& c) {
  if (!(c.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (c.batch < 1) throw ConfigError("batch size must be positive");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (c.target_sync < 1) throw ConfigError("target sync period must be positive");
  if (c.warmup < 0) throw ConfigError("warmup must be non-negative");
  if (c.eps_start < 0.0 || c.eps_start > 1.0 || c.eps_end < 0.0 || c.eps_end > 1.0)
    throw ConfigError("epsilon bounds must lie in [0, 1]");
  if (c.buffer_capacity < static_cast<std::size_t>(c.batch)) throw ConfigError("replay capacity below batch size");
  if (!(c.grad_clip > 0.0)) throw ConfigError("gradient clip must be positive");
  if (c.train_every < 1) throw ConfigError("train_every must be positive");
}

Learner::Learner(NetSpec spec, TrainConfig config, std::uint64_t seed)
    : online_(std::move(spec)), config_(config), rng_(seed) {
  validate(config_);
  online_.init(rng_, config_.head_scale);
  target_ = online_;
  adam_ = Adam(online_.param_count(), {config_.lr, config_.beta1, config_.beta2, config_.adam_eps});
  replay_ = ReplayBuffer(config_.buffer_capacity, online_.spec().input, online_.spec().branch_count());
  epsilon_ = {config_.eps_start, config_.eps_end, config_.eps_decay_steps};
}

std::vector<int> Learner::act(std::span<const float> state) {
  return act_epsilon_greedy(online_, state, epsilon(), rng_);
}

bool Learner::observe(std::span<const float> s, std::span<const int> a, float r, std::span<const float> s2,
                      bool terminal) {
  replay_.push(s, a, r, s2, terminal);
  ++steps_;
  bool trained = false;
  if (steps_ > config_.warmup && replay_.size() >= static_cast<std::size_t>(config_.batch) &&
      steps_ % config_.train_every == 0) {
    train_step();
    trained = true;
  }
  if (steps_ % config_.target_sync == 0) sync_target();
  return trained;
}

double Learner::train_step() {
  const auto batch = replay_.sample(static_cast<std::size_t>(config_.batch), rng_);
  const auto y = td_targets<float>(online_, target_, batch.s2, batch.r, batch.terminal, config_.gamma);
  online_.forward(batch.s, cache_);
  last_loss_ = branched_loss<float>(cache_, batch.a, y, dq_);
  online_.backward(cache_, dq_, grad_);
  clip_global_norm(grad_, config_.grad_clip);
  adam_.step(online_.params(), grad_);
  ++updates_;
  return last_loss_;
}

void Learner::set_params(const std::vector<float>& p) {
  if (p.size() != online_.param_count()) throw DimensionError("parameter vector size mismatch");
  online_.params().assign(p.begin(), p.end());
}

void Learner::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path);
  write_checkpoint(out, online_);
  std::ofstream side(path + ".json");
  if (!side) throw IoError("cannot write checkpoint sidecar " + path + ".json");
  side << checkpoint_sidecar(online_.spec(), config_, steps_, updates_) << '\n';
}

void Learner::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path);
  read_checkpoint(in, online_);
  target_ = online_;
}

// ---------------------------------------------------------------------------

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated checkpoint");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_checkpoint(std::ostream& out, const BranchNet<float>& net) {
  out.write("BDQ1", 4);
  put_u32(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& l : net.layers()) {
    put_u32(out, static_cast<std::uint32_t>(l.out));
    put_u32(out, static_cast<std::uint32_t>(l.in));
  }
  for (float f : net.params()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  if (!out) throw IoError("checkpoint write failed");
}

void read_checkpoint(std::istream& in, BranchNet<float>& net) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "BDQ1", 4) != 0) throw IoError("not a BDQ1 checkpoint");
  const std::uint32_t count = get_u32(in);
  if (count != net.layers().size()) throw DimensionError("checkpoint layer count differs from the network");
  for (const auto& l : net.layers()) {
    const auto out = get_u32(in), inw = get_u32(in);
    if (static_cast<int>(out) != l.out || static_cast<int>(inw) != l.in)
      throw DimensionError("checkpoint layer shape differs from the network");
  }
  for (float& f : net.params()) f = std::bit_cast<float>(get_u32(in));
}

std::string checkpoint_sidecar(const NetSpec& spec, const TrainConfig& c, long long steps, long long updates) {
  nlohmann::json j;
  j["spec"] = {{"input", spec.input},
               {"trunk", spec.trunk},
               {"value_hidden", spec.value_hidden},
               {"branch_hidden", spec.branch_hidden},
               {"branches", spec.branches},
               {"dueling", spec.dueling}};
  j["train"] = {{"lr", c.lr},
                {"batch", c.batch},
                {"gamma", c.gamma},
                {"target_sync", c.target_sync},
                {"warmup", c.warmup},
                {"eps_start", c.eps_start},
                {"eps_end", c.eps_end},
                {"eps_decay_steps", c.eps_decay_steps},
                {"buffer_capacity", c.buffer_capacity},
                {"grad_clip", c.grad_clip},
                {"train_every", c.train_every}};
  j["steps"] = steps;
  j["updates"] = updates;
  return j.dump(2);
}

}  // namespace vcp::rl
