#include "core/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "core/battery.hpp"
#include "core/errors.hpp"

namespace bess {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : ring_(capacity) {
  if (capacity == 0) throw std::invalid_argument("buffer capacity must be >= 1");
}

void ReplayBuffer::insert(Transition transition) {
  ring_[next_] = std::move(transition);
  next_ = (next_ + 1) % ring_.size();
  size_ = std::min(size_ + 1, ring_.size());
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  if (size_ == 0) throw std::logic_error("sampling from an empty buffer");
  return ring_[rng.below(size_)];
}

RunningNorm::RunningNorm(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

void RunningNorm::observe(std::span<const double> x) {
  if (frozen_) throw std::logic_error("cannot observe through restored statistics");
  if (x.size() != mean_.size()) throw std::invalid_argument("dimension mismatch");
  ++count_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / static_cast<double>(count_);
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

std::vector<double> RunningNorm::stddev() const {
  if (frozen_) return std_;
  std::vector<double> out(mean_.size(), 0.0);
  if (count_ > 0)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::sqrt(m2_[i] / static_cast<double>(count_));
  return out;
}

void RunningNorm::apply(std::span<double> x) const {
  if (x.size() != mean_.size()) throw std::invalid_argument("dimension mismatch");
  if (!frozen_ && count_ == 0) return;
  const std::vector<double> sd = stddev();
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = (x[i] - mean_[i]) / std::max(sd[i], 1e-6);
}

void RunningNorm::set(std::vector<double> mean, std::vector<double> stddev) {
  if (mean.size() != mean_.size() || stddev.size() != mean_.size())
    throw std::invalid_argument("dimension mismatch");
  mean_ = std::move(mean);
  std_ = std::move(stddev);
  m2_.assign(mean_.size(), 0.0);
  count_ = 1;
  frozen_ = true;
}

void DqnConfig::validate() const {
  if (total_steps < 0) throw std::invalid_argument("total_steps must be >= 0");
  if (!(exploration_fraction > 0.0 && exploration_fraction <= 1.0))
    throw std::invalid_argument("exploration_fraction must be in (0, 1]");
  if (!(epsilon_end >= 0.0 && epsilon_end <= epsilon_start && epsilon_start <= 1.0))
    throw std::invalid_argument("need 0 <= epsilon_end <= epsilon_start <= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (buffer_capacity < 1) throw std::invalid_argument("buffer_capacity must be >= 1");
  if (buffer_capacity < batch_size)
    throw std::invalid_argument("buffer_capacity below batch_size can never train");
  if (gradient_steps_per_env_step < 0)
    throw std::invalid_argument("gradient_steps_per_env_step must be >= 0");
  if (target_update_interval < 1)
    throw std::invalid_argument("target_update_interval must be >= 1");
  if (learning_starts < 0) throw std::invalid_argument("learning_starts must be >= 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0, 1]");
  if (hidden_sizes.empty()) throw std::invalid_argument("need at least one hidden layer");
  for (int h : hidden_sizes)
    if (h < 1) throw std::invalid_argument("hidden layer width must be >= 1");
  if (!(reward_scale > 0.0)) throw std::invalid_argument("reward_scale must be > 0");
  if (!(rms_decay >= 0.0 && rms_decay < 1.0))
    throw std::invalid_argument("rms_decay must be in [0, 1)");
  if (!(rms_epsilon > 0.0)) throw std::invalid_argument("rms_epsilon must be > 0");
}

double DqnConfig::epsilon_at(int step) const {
  const double anneal = exploration_fraction * total_steps;
  if (anneal <= 0.0) return epsilon_end;
  const double frac = std::min(1.0, static_cast<double>(step) / anneal);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

DqnPolicy::DqnPolicy(QNetwork net, RunningNorm norm)
    : net_(std::move(net)), norm_(std::move(norm)) {
  if (net_.input_dim() != static_cast<std::size_t>(kObservationDim) || net_.output_dim() != 3)
    throw std::invalid_argument("policy network must map observations to the 3 actions");
  if (norm_.dim() != static_cast<std::size_t>(kObservationDim))
    throw std::invalid_argument("normalisation dimension mismatch");
}

Action DqnPolicy::decide(const Observation& observation) {
  std::array<double, kObservationDim> x;
  observation.flatten(x.data());
  norm_.apply(x);
  return argmax_action(net_.q_values(x));
}

Action act_epsilon_greedy(const QNetwork& net, std::span<const double> observation,
                          double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in [0, 1]");
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<Action>(static_cast<int>(rng.below(3)));
  return argmax_action(net.q_values(observation));
}

namespace {

struct SgdState {
  Gradients rms_cache;
};

void apply_update(QNetwork& net, Gradients& grad, SgdState& state, const DqnConfig& config) {
  if (config.grad_clip > 0.0) {
    double norm2 = 0.0;
    for (const Layer& g : grad) {
      for (double v : g.w) norm2 += v * v;
      for (double v : g.b) norm2 += v * v;
    }
    if (norm2 > config.grad_clip * config.grad_clip) {
      const double scale = config.grad_clip / std::sqrt(norm2);
      for (Layer& g : grad) {
        for (double& v : g.w) v *= scale;
        for (double& v : g.b) v *= scale;
      }
    }
  }

  const double lr = config.learning_rate;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& layer = net.layers[l];
    Layer& g = grad[l];
    if (config.optimizer == Optimizer::Sgd) {
      for (std::size_t k = 0; k < layer.w.size(); ++k) layer.w[k] -= lr * g.w[k];
      for (std::size_t k = 0; k < layer.b.size(); ++k) layer.b[k] -= lr * g.b[k];
    } else {
      Layer& c = state.rms_cache[l];
      const double d = config.rms_decay;
      for (std::size_t k = 0; k < layer.w.size(); ++k) {
        c.w[k] = d * c.w[k] + (1.0 - d) * g.w[k] * g.w[k];
        layer.w[k] -= lr * g.w[k] / (std::sqrt(c.w[k]) + config.rms_epsilon);
      }
      for (std::size_t k = 0; k < layer.b.size(); ++k) {
        c.b[k] = d * c.b[k] + (1.0 - d) * g.b[k] * g.b[k];
        layer.b[k] -= lr * g.b[k] / (std::sqrt(c.b[k]) + config.rms_epsilon);
      }
    }
  }
}

}  // namespace

DqnPolicy train_dqn(const SeriesSet& train, const BatteryParams& params,
                    const DqnConfig& config) {
  config.validate();
  params.validate();
  if (train.size() == 0) throw InsufficientDataError("cannot train on an empty series");

  Rng rng(config.seed);
  std::vector<std::size_t> sizes{static_cast<std::size_t>(kObservationDim)};
  for (int h : config.hidden_sizes) sizes.push_back(static_cast<std::size_t>(h));
  sizes.push_back(3);
  QNetwork net(sizes, rng);
  QNetwork target = net;
  ReplayBuffer buffer(static_cast<std::size_t>(config.buffer_capacity));
  RunningNorm norm(static_cast<std::size_t>(kObservationDim));
  SgdState opt{zero_gradients(net)};
  Gradients grad;
  std::vector<Transition> batch(static_cast<std::size_t>(config.batch_size));

  BatteryState state;
  std::size_t pos = 0;
  const std::size_t n = train.size();
  std::array<double, kObservationDim> raw;

  for (int env_step = 0; env_step < config.total_steps; ++env_step) {
    make_observation(train.lmp, train.solar_mw, pos, state).flatten(raw.data());
    if (config.obs_normalization) norm.observe(raw);
    std::array<double, kObservationDim> normed = raw;
    if (config.obs_normalization) norm.apply(normed);
    const Action action = act_epsilon_greedy(net, normed, config.epsilon_at(env_step), rng);
    const StepOutcome outcome = step(state, action, train.at(pos), params);

    Transition tr;
    tr.obs.assign(raw.begin(), raw.end());
    tr.action = static_cast<int>(action);
    tr.reward = outcome.reward * config.reward_scale;
    tr.done = pos + 1 == n;
    if (tr.done) {
      tr.next_obs = tr.obs;  // never bootstrapped through
      state = BatteryState{};
      pos = 0;
    } else {
      state = outcome.next_state;
      ++pos;
      make_observation(train.lmp, train.solar_mw, pos, state).flatten(raw.data());
      tr.next_obs.assign(raw.begin(), raw.end());
    }
    buffer.insert(std::move(tr));

    if (env_step + 1 >= config.learning_starts &&
        buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
      for (int g = 0; g < config.gradient_steps_per_env_step; ++g) {
        for (Transition& slot : batch) {
          slot = buffer.sample(rng);
          if (config.obs_normalization) {
            norm.apply(slot.obs);
            norm.apply(slot.next_obs);
          }
        }
        const double loss = bellman_loss(net, target, batch, config.gamma, &grad);
        if (!std::isfinite(loss)) throw DivergenceError("training loss is not finite");
        apply_update(net, grad, opt, config);
      }
    }

    if ((env_step + 1) % config.target_update_interval == 0) {
      if (!net.finite()) throw DivergenceError("network parameters are not finite");
      target = net;
    }
  }

  return {std::move(net), std::move(norm)};
}

void save_weights(const QNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const auto n_widths = static_cast<std::uint32_t>(net.layers.size() + 1);
  out.write(reinterpret_cast<const char*>(&n_widths), sizeof n_widths);
  std::vector<std::uint32_t> widths;
  widths.push_back(static_cast<std::uint32_t>(net.layers.front().in));
  for (const Layer& layer : net.layers) widths.push_back(static_cast<std::uint32_t>(layer.out));
  out.write(reinterpret_cast<const char*>(widths.data()),
            static_cast<std::streamsize>(widths.size() * sizeof(std::uint32_t)));
  for (const Layer& layer : net.layers) {
    out.write(reinterpret_cast<const char*>(layer.w.data()),
              static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(layer.b.data()),
              static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing " + path);
}

QNetwork load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint32_t n_widths = 0;
  in.read(reinterpret_cast<char*>(&n_widths), sizeof n_widths);
  if (!in || n_widths < 2 || n_widths > 64) throw IoError(path + ": bad weight file header");
  std::vector<std::uint32_t> widths(n_widths);
  in.read(reinterpret_cast<char*>(widths.data()),
          static_cast<std::streamsize>(widths.size() * sizeof(std::uint32_t)));
  if (!in) throw IoError(path + ": truncated header");

  QNetwork net;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    if (layer.in == 0 || layer.out == 0 || layer.in * layer.out > (1u << 26))
      throw IoError(path + ": implausible layer shape");
    layer.w.resize(layer.in * layer.out);
    layer.b.resize(layer.out);
    in.read(reinterpret_cast<char*>(layer.w.data()),
            static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(layer.b.data()),
            static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    if (!in) throw IoError(path + ": truncated weights");
    net.layers.push_back(std::move(layer));
  }
  in.peek();
  if (!in.eof()) throw IoError(path + ": trailing bytes after weights");
  return net;
}

}  // namespace bess
