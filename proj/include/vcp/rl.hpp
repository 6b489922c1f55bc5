#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vcp/common.hpp"

namespace vcp::rl {

/// Layout of a branching Q-network. With `dueling` the net has a state-value
/// head and one advantage head per branch; without it, each branch outputs Q
/// directly (the flat DQN uses one branch holding every joint action).
struct NetSpec {
  int input = 0;
  std::vector<int> trunk{512, 256};
  int value_hidden = 128;   // 0: value head reads the trunk directly
  int branch_hidden = 128;  // 0: advantage heads read the trunk directly
  std::vector<int> branches;
  bool dueling = true;

  int branch_count() const { return static_cast<int>(branches.size()); }
  /// 1 + sum j_i with dueling, sum j_i otherwise.
  long long output_count() const;
  friend bool operator==(const NetSpec&, const NetSpec&) = default;
};

void validate(const NetSpec& spec);

/// Binary send/skip branches for B candidates: 1 + 2B outputs.
NetSpec branching_spec(int input, int candidates, std::vector<int> trunk, int value_hidden, int branch_hidden);

/// One head with 2^B joint actions. Throws GuardExceeded when 2^B exceeds
/// `max_outputs`.
NetSpec flat_spec(int input, int candidates, std::vector<int> trunk, int branch_hidden, long long max_outputs);

struct LayerShape {
  int out = 0;
  int in = 0;
  std::size_t offset = 0;  // weights (out x in, row-major), then out biases
  std::size_t size() const { return static_cast<std::size_t>(out) * static_cast<std::size_t>(in + 1); }
};

template <typename S>
using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Flat parameter storage on Eigen's alignment so reductions over layer views do
/// not depend on where the heap put the buffer.
template <typename S>
using ParamVector = std::vector<S, Eigen::aligned_allocator<S>>;

template <typename S>
struct ForwardCache {
  RowMat<S> input;
  std::vector<RowMat<S>> trunk_pre, trunk_act;
  RowMat<S> value_pre, value_act;
  RowMat<S> branch_pre, branch_act;  // stacked over branches
  RowMat<S> value;                   // batch x 1 (dueling only)
  std::vector<RowMat<S>> adv;        // raw head outputs
  std::vector<RowMat<S>> q;          // batch x j_i
};

/// MLP with shared trunk and action branches; all hidden units ReLU, heads linear.
/// Parameters live in one flat vector in layer declaration order: trunk layers,
/// value hidden, value out, stacked branch hidden, then one head per branch.
template <typename S>
class BranchNet {
 public:
  BranchNet() = default;
  explicit BranchNet(NetSpec spec);

  const NetSpec& spec() const { return spec_; }
  const std::vector<LayerShape>& layers() const { return layers_; }
  std::size_t param_count() const { return params_.size(); }
  ParamVector<S>& params() { return params_; }
  const ParamVector<S>& params() const { return params_; }

  /// Fan-in scaled uniform init; output layers scaled by `head_scale`.
  void init(Rng& rng, double head_scale = 0.01);

  void forward(const RowMat<S>& x, ForwardCache<S>& cache) const;
  /// Accumulates dLoss/dparams into `grad` (resized and zeroed first) from dLoss/dQ_i.
  void backward(const ForwardCache<S>& cache, const std::vector<RowMat<S>>& dq, ParamVector<S>& grad) const;

  /// Q_i for a single state.
  std::vector<std::vector<S>> q_values(std::span<const S> state) const;

 private:
  Eigen::Map<const RowMat<S>> weight(int layer) const;
  Eigen::Map<const Eigen::Matrix<S, 1, Eigen::Dynamic>> bias(int layer) const;
  int value_hidden_layer() const;
  int value_out_layer() const;
  int branch_hidden_layer() const;
  int head_layer(int branch) const;

  NetSpec spec_;
  std::vector<LayerShape> layers_;
  ParamVector<S> params_;
};

extern template class BranchNet<float>;
extern template class BranchNet<double>;

/// Branched TD loss: mean over the batch of (1/J) sum_i (y - Q_i(s, a_i))^2.
/// Fills dQ (only chosen sub-actions get gradient). `actions` is batch x J.
template <typename S>
double branched_loss(const ForwardCache<S>& cache, std::span<const int> actions, std::span<const S> targets,
                     std::vector<RowMat<S>>& dq);

/// y = r + gamma (1 - done) (1/J) sum_i Q^-_i(s', argmax_a Q_i(s', a)).
template <typename S>
std::vector<S> td_targets(const BranchNet<S>& online, const BranchNet<S>& target, const RowMat<S>& next_states,
                          std::span<const S> rewards, std::span<const std::uint8_t> terminal, double gamma);

/// Index of the first maximum.
template <typename S>
int argmax(std::span<const S> v);

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, AdamConfig config) : config_(config), m_(n, 0.0f), v_(n, 0.0f) {}
  void step(std::span<float> params, std::span<const float> grad);
  long long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<float> m_, v_;
  long long t_ = 0;
};

/// Scales `grad` so its L2 norm is at most `max_norm`; returns the norm before clipping.
double clip_global_norm(std::span<float> grad, double max_norm);

/// Linear schedule from start to end over `decay_steps`, constant afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.0;
  long long decay_steps = 1;
  double at(long long step) const;
};

/// With probability eps every branch takes a uniform sub-action, else the greedy tuple.
std::vector<int> act_epsilon_greedy(const BranchNet<float>& net, std::span<const float> state, double eps, Rng& rng);
std::vector<int> greedy_action(const BranchNet<float>& net, std::span<const float> state);

/// Fixed-capacity FIFO experience store; storage grows lazily up to capacity.
class ReplayBuffer {
 public:
  ReplayBuffer() = default;
  ReplayBuffer(std::size_t capacity, int state_dim, int branches);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int state_dim() const { return dim_; }
  int branches() const { return branches_; }

  void push(std::span<const float> s, std::span<const int> a, float r, std::span<const float> s2, bool terminal);

  struct Batch {
    RowMat<float> s, s2;
    std::vector<int> a;  // batch x J
    std::vector<float> r;
    std::vector<std::uint8_t> terminal;
    std::vector<std::size_t> index;
  };
  /// Uniform without replacement inside the batch (requires size() >= n).
  Batch sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_ = 0;
  int dim_ = 0;
  int branches_ = 0;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<float> s_, s2_, r_;
  std::vector<int> a_;
  std::vector<std::uint8_t> done_;
};

struct TrainConfig {
  double lr = 1e-4;
  int batch = 64;
  double gamma = 0.99;
  int target_sync = 1000;
  int warmup = 1000;
  double eps_start = 1.0;
  double eps_end = 0.0;
  long long eps_decay_steps = 100000;
  std::size_t buffer_capacity = 1000000;
  double grad_clip = 10.0;
  int train_every = 1;
  double head_scale = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

void validate(const TrainConfig& config);

/// Online/target pair with its optimizer, replay buffer and exploration schedule.
class Learner {
 public:
  Learner() = default;
  Learner(NetSpec spec, TrainConfig config, std::uint64_t seed);

  const NetSpec& spec() const { return online_.spec(); }
  const TrainConfig& config() const { return config_; }
  BranchNet<float>& online() { return online_; }
  const BranchNet<float>& online() const { return online_; }
  const BranchNet<float>& target() const { return target_; }
  ReplayBuffer& replay() { return replay_; }
  long long steps() const { return steps_; }
  long long updates() const { return updates_; }
  double epsilon() const { return epsilon_.at(steps_); }
  double last_loss() const { return last_loss_; }

  /// Epsilon-greedy action at the current step (does not advance the step counter).
  std::vector<int> act(std::span<const float> state);
  std::vector<int> act_greedy(std::span<const float> state) const { return greedy_action(online_, state); }

  /// Stores a transition, advances the step counter, and runs a gradient step
  /// and target sync when due. Returns whether a gradient step happened.
  bool observe(std::span<const float> s, std::span<const int> a, float r, std::span<const float> s2, bool terminal);

  /// One gradient step on a sampled batch; returns the loss.
  double train_step();
  void sync_target() { target_.params() = online_.params(); }

  /// Replaces the online parameters (federated broadcast); moments stay local.
  void set_params(const std::vector<float>& p);

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  BranchNet<float> online_, target_;
  TrainConfig config_;
  Adam adam_;
  ReplayBuffer replay_;
  EpsilonSchedule epsilon_;
  Rng rng_;
  long long steps_ = 0;
  long long updates_ = 0;
  double last_loss_ = 0.0;
  ForwardCache<float> cache_;
  std::vector<RowMat<float>> dq_;
  ParamVector<float> grad_;
};

/// Binary checkpoint: "BDQ1", uint32 layer count, per-layer (out, in) as uint32,
/// then per layer the row-major weights and the biases, all little-endian.
void write_checkpoint(std::ostream& out, const BranchNet<float>& net);
/// Throws DimensionError when the stored shapes differ from `net`.
void read_checkpoint(std::istream& in, BranchNet<float>& net);

/// JSON sidecar: net spec, train config, step counters.
std::string checkpoint_sidecar(const NetSpec& spec, const TrainConfig& config, long long steps, long long updates);

}  // namespace vcp::rl
