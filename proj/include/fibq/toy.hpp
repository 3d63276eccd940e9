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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fibq/inq.hpp"

namespace fibq::toy {

enum class Activation { relu, identity };

/// Row-major weight (out x in) and bias.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;
  Activation activation = Activation::relu;

  bool operator==(const DenseLayer&) const = default;
};

struct ToyNetwork {
  std::vector<DenseLayer> layers;

  bool operator==(const ToyNetwork&) const = default;
};

inline const std::vector<std::size_t> kDefaultWidths{2, 16, 32, 32, 32, 16, 8, 1};

/// Hidden layers use relu, the output layer is linear. Weights and biases
/// are drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
ToyNetwork make_network(std::span<const std::size_t> widths, std::uint64_t seed);

struct Sample {
  std::array<double, 2> x{};
  double y = 0.0;
};

/// y = sin(3 x1) + x2^2 with x uniform in [-1, 1]^2.
struct SyntheticTask {
  std::uint64_t seed = 0;
  std::vector<Sample> train;
  std::vector<Sample> validation;

  static SyntheticTask make(std::uint64_t seed, std::size_t train_size = 4096, std::size_t validation_size = 1024);

  /// Loss of the best constant predictor on the validation split.
  double baseline_loss() const;
};

double predict(const ToyNetwork& net, const std::array<double, 2>& x);

/// Mean squared error over `samples`.
double loss(const ToyNetwork& net, std::span<const Sample> samples);

/// Same layout as the network; holds d loss / d parameter.
using Gradient = ToyNetwork;

double loss_and_gradient(const ToyNetwork& net, std::span<const Sample> samples, Gradient& grad);

struct TrainConfig {
  int steps = 5000;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
};

struct TrainResult {
  ToyNetwork network;
  std::vector<double> loss_curve;
};

/// Mini-batch gradient descent. Entries whose tensor is frozen in `mask`
/// (ordered as to_parameters) receive no update.
TrainResult train(ToyNetwork net, const SyntheticTask& task, const TrainConfig& config, const FreezeMask& mask = {});

/// layer<i>.weight, layer<i>.bias, ... in layer order.
ParameterSet to_parameters(const ToyNetwork& net);
ToyNetwork from_parameters(const ToyNetwork& layout, const ParameterSet& params);

/// Retrains the floating tensors with `steps` of train() under `config`.
RetrainHook retrain_hook_for(const ToyNetwork& layout, const SyntheticTask& task, TrainConfig config);

/// Validation loss of the network rebuilt from the parameters.
Metric validation_metric(const ToyNetwork& layout, const SyntheticTask& task);

}  // namespace fibq::toy
