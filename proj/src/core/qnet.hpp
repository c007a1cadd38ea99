#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace bess {

class Rng;

struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;  // row-major, out x in
  std::vector<double> b;  // out
};

// Feed-forward value network: rectified hidden layers, linear output head.
class QNetwork {
 public:
  QNetwork() = default;
  // He-initialised weights, zero biases. sizes = [input, hidden..., output].
  QNetwork(std::span<const std::size_t> sizes, Rng& rng);

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out; }

  std::vector<double> forward(std::span<const double> input) const;
  // Convenience head for 3-action networks.
  std::array<double, 3> q_values(std::span<const double> observation) const;

  bool finite() const;

  std::vector<Layer> layers;
};

struct Transition {
  std::vector<double> obs;
  std::vector<double> next_obs;
  int action = 0;  // output-head index
  double reward = 0.0;
  bool done = false;
};

// Per-parameter partial derivatives, same shapes as the network.
using Gradients = std::vector<Layer>;

Gradients zero_gradients(const QNetwork& net);

// Mean squared Bellman residual over the batch:
//   loss = mean_i (Q(s_i, a_i) - [r_i + gamma * max_a Q_target(s'_i, a) * (1 - done_i)])^2
// The target network is held constant. When grad is non-null it receives
// d(loss)/d(theta) accumulated over the batch.
double bellman_loss(const QNetwork& net, const QNetwork& target,
                    std::span<const Transition> batch, double gamma, Gradients* grad);

}  // namespace bess
