#include "core/qnet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace bess {
namespace {

// Affine pass y = W x + b.
void affine(const Layer& layer, std::span<const double> x, std::vector<double>& y) {
  y.assign(layer.out, 0.0);
  for (std::size_t o = 0; o < layer.out; ++o) {
    double acc = layer.b[o];
    const double* row = layer.w.data() + o * layer.in;
    for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void relu(std::vector<double>& v) {
  for (double& x : v) x = std::max(0.0, x);
}

// Post-activation outputs of every layer, input first.
std::vector<std::vector<double>> forward_cached(const QNetwork& net,
                                                std::span<const double> input) {
  std::vector<std::vector<double>> acts;
  acts.reserve(net.layers.size() + 1);
  acts.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    std::vector<double> y;
    affine(net.layers[l], acts.back(), y);
    if (l + 1 < net.layers.size()) relu(y);
    acts.push_back(std::move(y));
  }
  return acts;
}

// Accumulates gradients for one sample given d(loss)/d(output).
void backprop(const QNetwork& net, const std::vector<std::vector<double>>& acts,
              std::vector<double> delta, Gradients& grad) {
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const Layer& layer = net.layers[l];
    const std::vector<double>& x = acts[l];
    Layer& g = grad[l];
    for (std::size_t o = 0; o < layer.out; ++o) {
      g.b[o] += delta[o];
      double* grow = g.w.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) grow[i] += delta[o] * x[i];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double* row = layer.w.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) prev[i] += delta[o] * row[i];
    }
    // Rectifier mask: gradient flows only where the layer below activated.
    for (std::size_t i = 0; i < layer.in; ++i)
      if (x[i] <= 0.0) prev[i] = 0.0;
    delta = std::move(prev);
  }
}

}  // namespace

QNetwork::QNetwork(std::span<const std::size_t> sizes, Rng& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("network needs at least two layer sizes");
  layers.reserve(sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer layer;
    layer.in = sizes[l];
    layer.out = sizes[l + 1];
    if (layer.in == 0 || layer.out == 0) throw std::invalid_argument("zero-width layer");
    layer.w.resize(layer.in * layer.out);
    layer.b.assign(layer.out, 0.0);
    const double sigma = std::sqrt(2.0 / static_cast<double>(layer.in));
    for (double& v : layer.w) v = rng.normal(0.0, sigma);
    layers.push_back(std::move(layer));
  }
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  if (layers.empty()) throw std::invalid_argument("empty network");
  if (input.size() != input_dim())
    throw std::invalid_argument("input dimension mismatch");
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    affine(layers[l], cur, next);
    if (l + 1 < layers.size()) relu(next);
    std::swap(cur, next);
  }
  return cur;
}

std::array<double, 3> QNetwork::q_values(std::span<const double> observation) const {
  if (output_dim() != 3) throw std::invalid_argument("network head is not 3-wide");
  const std::vector<double> out = forward(observation);
  return {out[0], out[1], out[2]};
}

bool QNetwork::finite() const {
  for (const Layer& layer : layers) {
    for (double v : layer.w)
      if (!std::isfinite(v)) return false;
    for (double v : layer.b)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

Gradients zero_gradients(const QNetwork& net) {
  Gradients grad;
  grad.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    Layer g;
    g.in = layer.in;
    g.out = layer.out;
    g.w.assign(layer.w.size(), 0.0);
    g.b.assign(layer.b.size(), 0.0);
    grad.push_back(std::move(g));
  }
  return grad;
}

double bellman_loss(const QNetwork& net, const QNetwork& target,
                    std::span<const Transition> batch, double gamma, Gradients* grad) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (grad) *grad = zero_gradients(net);

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition& tr : batch) {
    double y = tr.reward;
    if (!tr.done) {
      const std::vector<double> next_q = target.forward(tr.next_obs);
      y += gamma * *std::max_element(next_q.begin(), next_q.end());
    }
    const auto acts = forward_cached(net, tr.obs);
    const std::vector<double>& q = acts.back();
    const auto a = static_cast<std::size_t>(tr.action);
    if (a >= q.size()) throw std::invalid_argument("action index outside network head");
    const double residual = q[a] - y;
    loss += residual * residual * inv_n;
    if (grad) {
      std::vector<double> delta(q.size(), 0.0);
      delta[a] = 2.0 * residual * inv_n;
      backprop(net, acts, std::move(delta), *grad);
    }
  }
  return loss;
}

}  // namespace bess
