// Copyright 2026 The fibq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fibq/toy.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fibq/errors.hpp"

namespace fibq::toy {

ToyNetwork make_network(std::span<const std::size_t> widths, std::uint64_t seed) {
  if (widths.size() < 2) throw DomainError("network needs at least an input and an output width");
  if (widths.front() != 2 || widths.back() != 1) throw DomainError("toy network maps 2 inputs to 1 output");
  std::mt19937_64 rng(seed);
  ToyNetwork net;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    if (layer.out == 0) throw DomainError("layer width must be positive");
    layer.activation = l + 2 == widths.size() ? Activation::identity : Activation::relu;
    const double r = 1.0 / std::sqrt(static_cast<double>(layer.in));
    std::uniform_real_distribution<double> init(-r, r);
    layer.weight.resize(layer.in * layer.out);
    layer.bias.resize(layer.out);
    for (auto& w : layer.weight) w = init(rng);
    for (auto& b : layer.bias) b = init(rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

SyntheticTask SyntheticTask::make(std::uint64_t seed, std::size_t train_size, std::size_t validation_size) {
  SyntheticTask task;
  task.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&] {
    Sample s;
    s.x = {u(rng), u(rng)};
    s.y = std::sin(3.0 * s.x[0]) + s.x[1] * s.x[1];
    return s;
  };
  for (std::size_t i = 0; i < train_size; ++i) task.train.push_back(draw());
  for (std::size_t i = 0; i < validation_size; ++i) task.validation.push_back(draw());
  return task;
}

double SyntheticTask::baseline_loss() const {
  if (validation.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& s : validation) mean += s.y;
  mean /= static_cast<double>(validation.size());
  double var = 0.0;
  for (const auto& s : validation) var += (s.y - mean) * (s.y - mean);
  return var / static_cast<double>(validation.size());
}

namespace {

// Forward pass keeping every layer's post-activation output.
void forward(const ToyNetwork& net, const std::array<double, 2>& x, std::vector<std::vector<double>>& acts) {
  acts.resize(net.layers.size() + 1);
  acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const auto& in = acts[l];
    auto& out = acts[l + 1];
    out.assign(layer.out, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double z = layer.bias[o];
      const double* row = &layer.weight[o * layer.in];
      for (std::size_t i = 0; i < layer.in; ++i) z += row[i] * in[i];
      out[o] = layer.activation == Activation::relu ? std::max(z, 0.0) : z;
    }
  }
}

Gradient zeros_like(const ToyNetwork& net) {
  Gradient g = net;
  for (auto& layer : g.layers) {
    std::fill(layer.weight.begin(), layer.weight.end(), 0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
  return g;
}

}  // namespace

double predict(const ToyNetwork& net, const std::array<double, 2>& x) {
  std::vector<std::vector<double>> acts;
  forward(net, x, acts);
  return acts.back()[0];
}

double loss(const ToyNetwork& net, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  std::vector<std::vector<double>> acts;
  double acc = 0.0;
  for (const auto& s : samples) {
    forward(net, s.x, acts);
    const double d = acts.back()[0] - s.y;
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

double loss_and_gradient(const ToyNetwork& net, std::span<const Sample> samples, Gradient& grad) {
  grad = zeros_like(net);
  if (samples.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  double acc = 0.0;
  for (const auto& s : samples) {
    forward(net, s.x, acts);
    const double d = acts.back()[0] - s.y;
    acc += d * d;
    delta.assign(1, 2.0 * d * inv_n);
    for (std::size_t l = net.layers.size(); l-- > 0;) {
      const auto& layer = net.layers[l];
      auto& g = grad.layers[l];
      // dL/dz: relu passes the gradient only where its output was positive.
      if (layer.activation == Activation::relu) {
        for (std::size_t o = 0; o < layer.out; ++o) {
          if (acts[l + 1][o] <= 0.0) delta[o] = 0.0;
        }
      }
      const auto& in = acts[l];
      prev_delta.assign(layer.in, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o) {
        if (delta[o] == 0.0) continue;
        g.bias[o] += delta[o];
        const double* row = &layer.weight[o * layer.in];
        double* grow = &g.weight[o * layer.in];
        for (std::size_t i = 0; i < layer.in; ++i) {
          grow[i] += delta[o] * in[i];
          prev_delta[i] += delta[o] * row[i];
        }
      }
      std::swap(delta, prev_delta);
    }
  }
  return acc * inv_n;
}

TrainResult train(ToyNetwork net, const SyntheticTask& task, const TrainConfig& config, const FreezeMask& mask) {
  if (config.steps < 0) throw DomainError("step count must be non-negative");
  if (!(config.learning_rate > 0.0)) throw DomainError("learning rate must be positive");
  if (config.batch_size == 0 || task.train.empty()) throw DomainError("empty training batch");
  if (!mask.empty() && mask.size() != 2 * net.layers.size()) throw DomainError("freeze mask does not match network");

  auto frozen = [&](std::size_t idx) { return !mask.empty() && mask[idx]; };

  TrainResult result;
  result.loss_curve.reserve(static_cast<std::size_t>(config.steps));
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, task.train.size() - 1);
  std::vector<Sample> batch(config.batch_size);
  Gradient grad;
  for (int step = 0; step < config.steps; ++step) {
    for (auto& s : batch) s = task.train[pick(rng)];
    const double l = loss_and_gradient(net, batch, grad);
    if (!std::isfinite(l)) throw DivergenceError("training diverged at step " + std::to_string(step));
    result.loss_curve.push_back(l);
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
      auto& layer = net.layers[li];
      const auto& g = grad.layers[li];
      if (!frozen(2 * li)) {
        for (std::size_t k = 0; k < layer.weight.size(); ++k) layer.weight[k] -= config.learning_rate * g.weight[k];
      }
      if (!frozen(2 * li + 1)) {
        for (std::size_t k = 0; k < layer.bias.size(); ++k) layer.bias[k] -= config.learning_rate * g.bias[k];
      }
    }
  }
  result.network = std::move(net);
  return result;
}

ParameterSet to_parameters(const ToyNetwork& net) {
  ParameterSet params;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const std::string prefix = "layer" + std::to_string(l);
    params.push_back({prefix + ".weight", {layer.out, layer.in}, layer.weight, true});
    params.push_back({prefix + ".bias", {layer.out}, layer.bias, false});
  }
  return params;
}

ToyNetwork from_parameters(const ToyNetwork& layout, const ParameterSet& params) {
  if (params.size() != 2 * layout.layers.size()) throw DomainError("parameter count does not match network");
  ToyNetwork net = layout;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& layer = net.layers[l];
    const auto& w = params[2 * l].values;
    const auto& b = params[2 * l + 1].values;
    if (w.size() != layer.weight.size() || b.size() != layer.bias.size()) {
      throw DomainError("parameter sizes do not match layer " + std::to_string(l));
    }
    layer.weight = w;
    layer.bias = b;
  }
  return net;
}

RetrainHook retrain_hook_for(const ToyNetwork& layout, const SyntheticTask& task, TrainConfig config) {
  return [layout, &task, config](const ParameterSet& params, const FreezeMask& mask, int steps) {
    TrainConfig c = config;
    c.steps = steps;
    auto trained = train(from_parameters(layout, params), task, c, mask);
    ParameterSet out = to_parameters(trained.network);
    return out;
  };
}

Metric validation_metric(const ToyNetwork& layout, const SyntheticTask& task) {
  return [layout, &task](const ParameterSet& params, const FreezeMask&) {
    return loss(from_parameters(layout, params), task.validation);
  };
}

}  // namespace fibq::toy
