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

#include "fibq/inq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "fibq/errors.hpp"

namespace fibq {

FractionSchedule default_schedule(const std::vector<std::string>& tensor_ids) {
  if (tensor_ids.empty()) throw DomainError("schedule needs at least one tensor");
  FractionSchedule s;
  std::size_t next = 0;
  for (std::size_t size = 1; next < tensor_ids.size(); ++size) {
    const std::size_t take = std::min(size, tensor_ids.size() - next);
    s.fractions.emplace_back(tensor_ids.begin() + static_cast<std::ptrdiff_t>(next),
                             tensor_ids.begin() + static_cast<std::ptrdiff_t>(next + take));
    next += take;
  }
  return s;
}

void validate_schedule(const FractionSchedule& schedule, const std::vector<std::string>& tensor_ids) {
  std::set<std::string> expected(tensor_ids.begin(), tensor_ids.end());
  std::set<std::string> seen;
  for (const auto& fraction : schedule.fractions) {
    if (fraction.empty()) throw DomainError("schedule contains an empty fraction");
    for (const auto& id : fraction) {
      if (!expected.contains(id)) throw DomainError("scheduled tensor '" + id + "' is not a weight tensor");
      if (!seen.insert(id).second) throw DomainError("tensor '" + id + "' appears in more than one fraction");
    }
  }
  if (seen.size() != expected.size()) throw DomainError("schedule does not cover every weight tensor");
}

std::vector<std::size_t> split_sizes(std::size_t size, const RefinementPolicy& policy) {
  const auto& pat = policy.split_pattern;
  const std::size_t total = std::accumulate(pat.begin(), pat.end(), std::size_t{0});
  const bool usable = pat.size() > 1 && total == size &&
                      std::none_of(pat.begin(), pat.end(), [](std::size_t p) { return p == 0; });
  if (usable) return pat;
  return std::vector<std::size_t>(size, 1);
}

const char* to_string(EventKind kind) noexcept { return kind == EventKind::commit ? "commit" : "rollback"; }

double InqEvent::degradation() const noexcept {
  if (metric_before == 0.0) return metric_after > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return (metric_after - metric_before) / std::abs(metric_before);
}

std::string InqEvent::action() const {
  if (kind == EventKind::rollback) return "rollback-split";
  if (!retrained) return degraded ? "commit-ptq-degraded" : "commit-ptq";
  return degraded ? "commit-degraded" : "commit";
}

std::string to_record(const InqEvent& e) {
  std::ostringstream os;
  os << "event=" << to_string(e.kind) << " scheme=" << to_string(e.scheme) << " depth=" << e.depth << " size="
     << e.tensors.size() << " tensors=";
  for (std::size_t i = 0; i < e.tensors.size(); ++i) os << (i ? "," : "") << e.tensors[i];
  os << " metric_before=" << e.metric_before << " metric_quantized=" << e.metric_quantized
     << " metric_after=" << e.metric_after << " degradation=" << e.degradation() << " retrained=" << e.retrained
     << " frozen=" << e.frozen_codes.size() << " action=" << e.action();
  return os.str();
}

bool InqResult::all_weights_frozen() const {
  return std::all_of(params.begin(), params.end(), [&](const Parameter& p) {
    if (!p.is_weight) return true;
    auto it = states.find(p.name);
    return it != states.end() && it->second.status == TensorStatus::frozen;
  });
}

InqScheduler::InqScheduler(ParameterSet params, Metric metric, RetrainHook hook, InqOptions options)
    : metric_(std::move(metric)), hook_(std::move(hook)), options_(std::move(options)) {
  std::set<std::string> names;
  for (const auto& p : params) {
    if (!names.insert(p.name).second) throw DomainError("duplicate parameter name '" + p.name + "'");
    if (p.values.size() != element_count(p.shape)) throw DomainError("parameter '" + p.name + "' size/shape mismatch");
    if (p.is_weight) result_.states[p.name] = TensorState{};
  }
  result_.params = std::move(params);
}

std::size_t InqScheduler::position(const std::string& id) const {
  for (std::size_t i = 0; i < result_.params.size(); ++i) {
    if (result_.params[i].name == id) return i;
  }
  throw DomainError("unknown tensor '" + id + "'");
}

FreezeMask InqScheduler::freeze_mask() const {
  FreezeMask mask(result_.params.size(), false);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    auto it = result_.states.find(result_.params[i].name);
    mask[i] = it != result_.states.end() && it->second.status == TensorStatus::frozen;
  }
  return mask;
}

bool InqScheduler::has_floating_weight() const {
  return std::any_of(result_.states.begin(), result_.states.end(),
                     [](const auto& kv) { return kv.second.status == TensorStatus::floating; });
}

void InqScheduler::quantize_into(const std::string& id, Scheme scheme) {
  auto& p = result_.params[position(id)];
  QuantizedTensor q = quantize_uniform(FloatTensor{p.name, p.shape, p.values}, 8);
  if (scheme == Scheme::fcq) q = apply_fcq(q);
  p.values = reconstruct(q);
  auto& st = result_.states.at(id);
  st.status = TensorStatus::frozen;
  st.scheme = scheme;
  st.snapshot = std::move(q);
}

void InqScheduler::check_frozen_unchanged(const ParameterSet& before, const ParameterSet& after) const {
  if (after.size() != before.size()) throw ContractViolation("retrain hook changed the number of parameters");
  const FreezeMask mask = freeze_mask();
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i].name != before[i].name || after[i].shape != before[i].shape ||
        after[i].values.size() != before[i].values.size() || after[i].is_weight != before[i].is_weight) {
      throw ContractViolation("retrain hook changed the layout of '" + before[i].name + "'");
    }
    if (!mask[i]) continue;
    for (std::size_t k = 0; k < before[i].values.size(); ++k) {
      if (std::bit_cast<std::uint64_t>(after[i].values[k]) != std::bit_cast<std::uint64_t>(before[i].values[k])) {
        throw ContractViolation("retrain hook modified frozen tensor '" + before[i].name + "'");
      }
    }
  }
}

InqEvent InqScheduler::make_event(EventKind kind, const std::vector<std::string>& ids, Scheme scheme,
                                  int depth) const {
  InqEvent e;
  e.kind = kind;
  e.tensors = ids;
  e.scheme = scheme;
  e.depth = depth;
  for (const auto& [name, st] : result_.states) {
    if (st.status == TensorStatus::frozen) e.frozen_codes[name] = st.snapshot->codes;
  }
  return e;
}

void InqScheduler::run(const FractionSchedule& schedule, Scheme scheme) {
  std::set<std::string> seen;
  for (const auto& fraction : schedule.fractions) {
    if (fraction.empty()) throw DomainError("schedule contains an empty fraction");
    for (const auto& id : fraction) {
      auto it = result_.states.find(id);
      if (it == result_.states.end()) throw DomainError("scheduled tensor '" + id + "' is not a weight tensor");
      if (it->second.status != TensorStatus::floating) throw DomainError("tensor '" + id + "' is already frozen");
      if (!seen.insert(id).second) throw DomainError("tensor '" + id + "' appears in more than one fraction");
    }
  }
  for (const auto& fraction : schedule.fractions) run_fraction(fraction, scheme, 0);
}

void InqScheduler::run_fraction(const std::vector<std::string>& ids, Scheme scheme, int depth) {
  const ParameterSet saved_params = result_.params;
  const auto saved_states = result_.states;

  const double before = metric_(result_.params, freeze_mask());
  for (const auto& id : ids) quantize_into(id, scheme);
  const double quantized = metric_(result_.params, freeze_mask());

  // Once no weight is left floating there is nothing to retrain: the step
  // degenerates to post-training quantization.
  const bool retrain = has_floating_weight();
  if (retrain) {
    ParameterSet updated = hook_(result_.params, freeze_mask(), options_.retrain_steps);
    check_frozen_unchanged(result_.params, updated);
    result_.params = std::move(updated);
  }
  const double after = metric_(result_.params, freeze_mask());

  InqEvent probe;
  probe.metric_before = before;
  probe.metric_after = after;
  const bool degraded = probe.degradation() > options_.policy.tau;

  if (degraded && ids.size() > 1) {
    result_.params = saved_params;
    result_.states = saved_states;
    InqEvent e = make_event(EventKind::rollback, ids, scheme, depth);
    e.metric_before = before;
    e.metric_quantized = quantized;
    e.metric_after = after;
    e.retrained = retrain;
    e.degraded = true;
    result_.log.push_back(std::move(e));

    std::size_t next = 0;
    for (std::size_t size : split_sizes(ids.size(), options_.policy)) {
      std::vector<std::string> sub(ids.begin() + static_cast<std::ptrdiff_t>(next),
                                   ids.begin() + static_cast<std::ptrdiff_t>(next + size));
      next += size;
      run_fraction(sub, scheme, depth + 1);
    }
    return;
  }

  InqEvent e = make_event(EventKind::commit, ids, scheme, depth);
  e.metric_before = before;
  e.metric_quantized = quantized;
  e.metric_after = after;
  e.retrained = retrain;
  e.degraded = degraded;
  result_.log.push_back(std::move(e));
}

void InqScheduler::post_training(const std::vector<std::string>& tensor_ids) {
  if (tensor_ids.empty()) return;
  for (const auto& id : tensor_ids) {
    auto it = result_.states.find(id);
    if (it == result_.states.end()) throw DomainError("tensor '" + id + "' is not a weight tensor");
    if (it->second.status != TensorStatus::floating) throw DomainError("tensor '" + id + "' is already frozen");
  }
  const double before = metric_(result_.params, freeze_mask());
  for (const auto& id : tensor_ids) quantize_into(id, Scheme::uniform);
  const double after = metric_(result_.params, freeze_mask());
  InqEvent e = make_event(EventKind::commit, tensor_ids, Scheme::uniform, 0);
  e.metric_before = before;
  e.metric_quantized = after;
  e.metric_after = after;
  e.retrained = false;
  result_.log.push_back(std::move(e));
}

std::vector<std::string> weight_ids(const ParameterSet& params) {
  std::vector<std::string> ids;
  for (const auto& p : params) {
    if (p.is_weight) ids.push_back(p.name);
  }
  return ids;
}

InqResult run_inq(ParameterSet params, const FractionSchedule& schedule, Scheme scheme, const Metric& metric,
                  const RetrainHook& hook, const InqOptions& options) {
  validate_schedule(schedule, weight_ids(params));
  InqScheduler scheduler(std::move(params), metric, hook, options);
  scheduler.run(schedule, scheme);
  return std::move(scheduler).take();
}

InqResult mixed_policy_run(ParameterSet params, std::size_t split, const Metric& metric, const RetrainHook& hook,
                           const InqOptions& options) {
  const auto ids = weight_ids(params);
  if (ids.empty()) throw DomainError("network has no weight tensors");
  if (split > ids.size()) throw DomainError("split index beyond the tensor count");

  InqScheduler scheduler(std::move(params), metric, hook, options);
  const std::vector<std::string> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(split));
  if (!prefix.empty()) scheduler.run(default_schedule(prefix), Scheme::fcq);
  if (split < ids.size()) {
    const std::vector<std::string> middle(ids.begin() + static_cast<std::ptrdiff_t>(split), ids.end() - 1);
    if (!middle.empty()) scheduler.run(default_schedule(middle), Scheme::uniform);
    scheduler.post_training({ids.back()});
  }
  return std::move(scheduler).take();
}

RetrainHook no_op_hook() {
  return [](const ParameterSet& p, const FreezeMask&, int) { return p; };
}

}  // namespace fibq
