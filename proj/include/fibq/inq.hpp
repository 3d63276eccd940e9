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

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fibq/quantizer.hpp"

namespace fibq {

/// One named parameter tensor. Only weights take part in the schedule;
/// biases stay floating point and trainable throughout.
struct Parameter {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
  bool is_weight = true;

  bool operator==(const Parameter&) const = default;
};

using ParameterSet = std::vector<Parameter>;

/// frozen[i] refers to ParameterSet element i.
using FreezeMask = std::vector<bool>;

/// (parameters, freeze mask, step budget) -> updated parameters.
using RetrainHook = std::function<ParameterSet(const ParameterSet&, const FreezeMask&, int)>;

/// Lower is better (validation loss, MSE, ...).
using Metric = std::function<double(const ParameterSet&, const FreezeMask&)>;

struct FractionSchedule {
  std::vector<std::vector<std::string>> fractions;
};

/// Sizes 1, 2, 3, ... in order; the last fraction takes whatever is left.
FractionSchedule default_schedule(const std::vector<std::string>& tensor_ids);

/// Throws DomainError unless `schedule` partitions `tensor_ids`.
void validate_schedule(const FractionSchedule& schedule, const std::vector<std::string>& tensor_ids);

struct RefinementPolicy {
  /// Allowed relative metric increase per fraction.
  double tau = 0.10;
  /// Split applied to a degraded fraction whose size matches the pattern's
  /// sum; every other degraded fraction is split into singletons.
  std::vector<std::size_t> split_pattern{1, 2, 2};

  static RefinementPolicy never() { return {std::numeric_limits<double>::infinity(), {1, 2, 2}}; }
};

/// Sub-fraction sizes used when `size` tensors degraded.
std::vector<std::size_t> split_sizes(std::size_t size, const RefinementPolicy& policy);

enum class TensorStatus { floating, frozen };

struct TensorState {
  TensorStatus status = TensorStatus::floating;
  Scheme scheme = Scheme::uniform;
  std::optional<QuantizedTensor> snapshot;
};

enum class EventKind { commit, rollback };

const char* to_string(EventKind kind) noexcept;

struct InqEvent {
  EventKind kind = EventKind::commit;
  std::vector<std::string> tensors;
  Scheme scheme = Scheme::fcq;
  int depth = 0;
  double metric_before = 0.0;
  double metric_quantized = 0.0;
  double metric_after = 0.0;
  bool retrained = false;
  /// Degradation exceeded the threshold (rollbacks, and singletons that had
  /// to be committed anyway).
  bool degraded = false;
  /// Codes of every frozen tensor once the event was recorded.
  std::map<std::string, std::vector<std::uint16_t>> frozen_codes;

  double degradation() const noexcept;
  std::string action() const;
};

/// `event=... tensors=a,b metric_before=... ...` single-line record.
std::string to_record(const InqEvent& event);

struct InqResult {
  ParameterSet params;
  std::map<std::string, TensorState> states;
  std::vector<InqEvent> log;

  /// Number of quantize-and-evaluate attempts (commits plus rollbacks).
  std::size_t quantization_events() const noexcept { return log.size(); }
  bool all_weights_frozen() const;
};

struct InqOptions {
  RefinementPolicy policy;
  int retrain_steps = 100;
};

/// Incremental quantization driver. Keeps the parameters, per-tensor state
/// and event log across successive fraction schedules.
class InqScheduler {
 public:
  InqScheduler(ParameterSet params, Metric metric, RetrainHook hook, InqOptions options);

  /// Quantizes, freezes and retrains fraction by fraction. Every scheduled
  /// tensor must be a still-floating weight.
  void run(const FractionSchedule& schedule, Scheme scheme);

  /// Quantizes the given tensors to 8-bit uniform codes with no retraining.
  void post_training(const std::vector<std::string>& tensor_ids);

  const InqResult& result() const noexcept { return result_; }
  InqResult take() && { return std::move(result_); }

 private:
  void run_fraction(const std::vector<std::string>& ids, Scheme scheme, int depth);
  void quantize_into(const std::string& id, Scheme scheme);
  FreezeMask freeze_mask() const;
  bool has_floating_weight() const;
  void check_frozen_unchanged(const ParameterSet& before, const ParameterSet& after) const;
  InqEvent make_event(EventKind kind, const std::vector<std::string>& ids, Scheme scheme, int depth) const;
  std::size_t position(const std::string& id) const;

  Metric metric_;
  RetrainHook hook_;
  InqOptions options_;
  InqResult result_;
};

InqResult run_inq(ParameterSet params, const FractionSchedule& schedule, Scheme scheme, const Metric& metric,
                  const RetrainHook& hook, const InqOptions& options);

/// Weights before `split` go through FCQ + INQ, the rest up to the last one
/// through uniform 8-bit + INQ, and the last weight (when split < count) is
/// quantized post-training.
InqResult mixed_policy_run(ParameterSet params, std::size_t split, const Metric& metric, const RetrainHook& hook,
                           const InqOptions& options);

/// Hook that returns its input unchanged.
RetrainHook no_op_hook();

std::vector<std::string> weight_ids(const ParameterSet& params);

}  // namespace fibq
