#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/policy.hpp"
#include "core/qnet.hpp"
#include "core/rng.hpp"

namespace bess {

// Fixed-capacity ring with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void insert(Transition transition);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return ring_.size(); }
  const Transition& sample(Rng& rng) const;

 private:
  std::vector<Transition> ring_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
};

// Per-feature standardisation with running (Welford) statistics.
class RunningNorm {
 public:
  explicit RunningNorm(std::size_t dim);

  void observe(std::span<const double> x);
  void apply(std::span<double> x) const;  // (x - mean) / max(std, floor)
  std::size_t dim() const { return mean_.size(); }
  std::size_t count() const { return count_; }
  const std::vector<double>& mean() const { return mean_; }
  std::vector<double> stddev() const;
  void set(std::vector<double> mean, std::vector<double> stddev);

 private:
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> std_;  // used when restored from saved stats
  std::size_t count_ = 0;
  bool frozen_ = false;
};

enum class Optimizer { Sgd, RmsProp };

struct DqnConfig {
  int total_steps = 200000;
  double exploration_fraction = 0.9685;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int buffer_capacity = 50000;
  int gradient_steps_per_env_step = 1;
  int target_update_interval = 500;
  int learning_starts = 1000;
  double gamma = 0.99;
  std::uint64_t seed = 0;
  bool obs_normalization = true;
  std::vector<int> hidden_sizes{64, 64};
  Optimizer optimizer = Optimizer::Sgd;
  double rms_decay = 0.99;
  double rms_epsilon = 1e-8;
  // Rewards are in dollars per quarter-hour (hundreds to thousands); scaling
  // them down keeps Q-targets near unit range for plain gradient descent.
  double reward_scale = 1e-3;
  double grad_clip = 10.0;  // global L2 norm; <= 0 disables

  void validate() const;
  // Linear anneal from epsilon_start to epsilon_end, flat afterwards.
  double epsilon_at(int step) const;
};

// Greedy wrapper around a trained network plus frozen normalisation.
class DqnPolicy : public Policy {
 public:
  DqnPolicy(QNetwork net, RunningNorm norm);

  Action decide(const Observation& observation) override;
  const QNetwork& net() const { return net_; }
  const RunningNorm& norm() const { return norm_; }

 private:
  QNetwork net_;
  RunningNorm norm_;
};

// Epsilon-greedy over the network head; greedy ties resolve by the fixed
// action order.
Action act_epsilon_greedy(const QNetwork& net, std::span<const double> observation,
                          double epsilon, Rng& rng);

DqnPolicy train_dqn(const SeriesSet& train, const BatteryParams& params,
                    const DqnConfig& config);

// Flat binary weight file: uint32 width count, widths, then per layer the
// row-major weight matrix and bias vector as 64-bit floats.
void save_weights(const QNetwork& net, const std::string& path);
QNetwork load_weights(const std::string& path);

}  // namespace bess
