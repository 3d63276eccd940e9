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

#include "fibq/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>

#include "fibq/codec.hpp"
#include "fibq/container.hpp"
#include "fibq/errors.hpp"
#include "fibq/fibbinary.hpp"
#include "fibq/hwmodel.hpp"
#include "fibq/inq.hpp"
#include "fibq/quantizer.hpp"
#include "fibq/report.hpp"
#include "fibq/toy.hpp"

namespace fibq::cli {

namespace {

Container load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("input file '" + path + "' does not exist");
  return load_container(path);
}

std::string precise(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

void cmd_quantize(const std::string& in, const std::string& out, const std::string& scheme, std::ostream& os) {
  int bits = 0;
  bool fcq = false;
  if (scheme == "uniform8") {
    bits = 8;
  } else if (scheme == "uniform16") {
    bits = 16;
  } else if (scheme == "fcq8") {
    bits = 8;
    fcq = true;
  } else {
    throw UsageError("unknown scheme '" + scheme + "' (expected uniform8, uniform16 or fcq8)");
  }

  const Container src = load(in);
  Container dst;
  std::map<std::string, std::string> lines;
  for (const auto& t : src.tensors) {
    if (t.dtype != DType::float32) {
      dst.tensors.push_back(t);
      continue;
    }
    const FloatTensor f = to_float_tensor(t);
    const bool bias = is_bias_name(t.name);
    QuantizedTensor q;
    try {
      q = quantize_uniform(f, bits);
      if (fcq && !bias) q = apply_fcq(q);
    } catch (const std::exception& e) {
      throw DomainError("tensor '" + t.name + "': " + e.what());
    }
    dst.tensors.push_back(make_code_tensor(q));
    lines[t.name] = "quantize tensor=" + t.name + " role=" + (bias ? "bias" : "weight") + " scheme=" +
                    to_string(q.scheme) + " bits=" + std::to_string(bits) +
                    " mse=" + precise(mse(f.values, reconstruct(q)));
  }
  save_container(dst, out);
  for (const auto& [name, line] : lines) os << line << "\n";
}

void cmd_compress(const std::string& in, const std::string& out, std::size_t group, std::ostream& os) {
  if (group == 0) throw UsageError("--group must be at least 1");
  Container c = load(in);

  std::vector<std::size_t> slots;
  std::vector<QuantizedTensor> quantized;
  std::vector<IndexSequence> seqs;
  for (std::size_t i = 0; i < c.tensors.size(); ++i) {
    const auto& t = c.tensors[i];
    if (t.dtype != DType::u8 || is_bias_name(t.name)) continue;
    QuantizedTensor q = to_quantized(t);
    // Throws, naming tensor and position, on the first non-fibbinary code.
    seqs.push_back(word_length_compress(q.codes, t.name));
    slots.push_back(i);
    quantized.push_back(std::move(q));
  }
  const auto streams = compress_grouped(seqs, group);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    c.tensors[slots[k]] = make_word_count_tensor(quantized[k], streams[k]);
  }
  save_container(c, out);
  os << "compress group=" << group << " tensors=" << slots.size() << "\n";
  print_compression(os, compression_summary(c));
}

void cmd_decompress(const std::string& in, const std::string& out, std::ostream& os) {
  Container c = load(in);
  std::size_t n = 0;
  for (auto& t : c.tensors) {
    if (t.dtype != DType::word_count) continue;
    t = make_code_tensor(to_quantized(t));
    ++n;
  }
  save_container(c, out);
  os << "decompress tensors=" << n << "\n";
}

void cmd_stats(const std::string& in, std::ostream& os) {
  const Container c = load(in);
  print_compression(os, compression_summary(c));
  print_memory(os, memory_report(c));
  // Figures measured on the full-size receiver; not derivable from an
  // arbitrary container and printed for comparison only.
  os << "reference cr_per_tensor=1.59 cr_group3=1.63 saving_vs_16b=0.638 saving_vs_8b=0.26\n";
}

void cmd_hw_report(int bits, bool discover, std::ostream& os) {
  if (bits < 3 || bits > 16) throw UsageError("--bits must be within 3..16");
  const std::uint64_t nominal = static_cast<std::uint64_t>(bits) * (bits - 1) / 2;
  os << to_record(cost_report(bits, nominal)) << " source=nominal\n";
  if (!discover) return;
  if (bits > 12) throw UsageError("--discover is limited to --bits <= 12");
  const MultiplierArray array(bits);
  const auto cells = discover_replaceable(array, FibbinaryTable::get(bits));
  os << "discover n=" << bits << " replaceable=" << cells.size() << " nominal=" << nominal
     << " match=" << (cells.size() == nominal ? "yes" : "no") << " cells=";
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].row << ":" << cells[i].column;
  os << "\n";
  os << to_record(cost_report(bits, cells.size())) << " source=discovered\n";
}

void cmd_inq_demo(const InqDemoOptions& o, std::ostream& os) {
  const auto widths = o.widths.empty() ? toy::kDefaultWidths : o.widths;
  const auto task = toy::SyntheticTask::make(o.seed);
  toy::TrainConfig cfg;
  cfg.steps = o.train_steps;
  cfg.learning_rate = o.learning_rate;
  cfg.seed = o.seed;
  const auto trained = toy::train(toy::make_network(widths, o.seed), task, cfg).network;
  const double float_loss = toy::loss(trained, task.validation);
  os << "train steps=" << o.train_steps << " float_val_loss=" << float_loss
     << " baseline_loss=" << task.baseline_loss() << "\n";

  Metric metric = toy::validation_metric(trained, task);
  if (o.force_degradation) {
    const std::string target = *o.force_degradation;
    const auto params = toy::to_parameters(trained);
    auto it = std::find_if(params.begin(), params.end(), [&](const Parameter& p) { return p.name == target; });
    if (it == params.end() || !it->is_weight) throw UsageError("--force-degradation names no weight tensor");
    const auto idx = static_cast<std::size_t>(it - params.begin());
    metric = [base = metric, idx](const ParameterSet& p, const FreezeMask& mask) {
      return base(p, mask) + (mask[idx] ? 10.0 : 0.0);
    };
  }

  InqOptions options;
  options.policy.tau = o.tau;
  options.retrain_steps = o.steps;
  toy::TrainConfig retrain_cfg = cfg;
  retrain_cfg.learning_rate = o.retrain_learning_rate;
  retrain_cfg.batch_size = o.retrain_batch;
  const auto hook = toy::retrain_hook_for(trained, task, retrain_cfg);
  const auto params = toy::to_parameters(trained);
  const InqResult result =
      o.mixed_split ? mixed_policy_run(params, *o.mixed_split, metric, hook, options)
                    : run_inq(params, default_schedule(weight_ids(params)), Scheme::fcq, metric, hook, options);

  for (const auto& e : result.log) os << to_record(e) << "\n";

  std::size_t frozen = 0, fib = 0, weights = 0;
  for (const auto& [name, st] : result.states) {
    ++weights;
    if (st.status != TensorStatus::frozen) continue;
    ++frozen;
    const auto& codes = st.snapshot->codes;
    if (std::all_of(codes.begin(), codes.end(), [](std::uint16_t c) { return (c & (c >> 1)) == 0; })) ++fib;
  }
  const double final_loss = toy::loss(toy::from_parameters(trained, result.params), task.validation);
  os << "final val_loss=" << final_loss << " float_val_loss=" << float_loss
     << " ratio=" << (float_loss > 0 ? final_loss / float_loss : 0.0) << " frozen=" << frozen << "/" << weights
     << " fibbinary_tensors=" << fib << " events=" << result.log.size() << "\n";
}

void cmd_toy_weights(std::uint64_t seed, int train_steps, const std::string& out, std::ostream& os) {
  const auto task = toy::SyntheticTask::make(seed);
  toy::TrainConfig cfg;
  cfg.steps = train_steps;
  cfg.seed = seed;
  const auto net = toy::train(toy::make_network(toy::kDefaultWidths, seed), task, cfg).network;
  Container c;
  for (const auto& p : toy::to_parameters(net)) c.tensors.push_back(make_float_tensor({p.name, p.shape, p.values}));
  save_container(c, out);
  os << "toy-weights seed=" << seed << " steps=" << train_steps << " tensors=" << c.tensors.size()
     << " val_loss=" << toy::loss(net, task.validation) << "\n";
}

}  // namespace fibq::cli
