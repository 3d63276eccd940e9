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

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fibq/commands.hpp"

namespace {

std::vector<std::size_t> parse_widths(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw fibq::cli::UsageError("bad --widths entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fibq::cli;
  CLI::App app{"fibq: fibbinary quantization and compression toolkit"};
  app.require_subcommand(1);

  std::string in, out, scheme;
  std::size_t group = 1;

  auto* quantize = app.add_subcommand("quantize", "Quantize float tensors (uniform8, uniform16, fcq8)");
  quantize->add_option("--in", in, "Input container")->required();
  quantize->add_option("--out", out, "Output container")->required();
  quantize->add_option("--scheme", scheme, "uniform8 | uniform16 | fcq8")->required();

  auto* compress = app.add_subcommand("compress", "Word-length + word-count compress FCQ weight tensors");
  compress->add_option("--in", in)->required();
  compress->add_option("--out", out)->required();
  compress->add_option("--group", group, "Tensors sharing one (A, B) pair");

  auto* decompress = app.add_subcommand("decompress", "Expand word-count tensors back to 8-bit codes");
  decompress->add_option("--in", in)->required();
  decompress->add_option("--out", out)->required();

  auto* stats = app.add_subcommand("stats", "Compression ratio and memory report");
  stats->add_option("--in", in)->required();

  int bits = 8;
  bool discover = false;
  auto* hw = app.add_subcommand("hw-report", "OR-based approximate multiplier cost model");
  hw->add_option("--bits", bits, "Multiplier width");
  hw->add_flag("--discover", discover, "Run the exhaustive replaceable-cell search");

  InqDemoOptions demo;
  std::string tau = "0.10", widths, force;
  std::size_t split = 0;
  auto* inq = app.add_subcommand("inq-demo", "Incremental quantization on the toy network");
  inq->add_option("--seed", demo.seed);
  inq->add_option("--tau", tau, "Degradation threshold (number or 'inf')");
  inq->add_option("--steps", demo.steps, "Retrain steps per fraction");
  inq->add_option("--train-steps", demo.train_steps, "Float pre-training steps");
  inq->add_option("--retrain-lr", demo.retrain_learning_rate, "Learning rate of the retrain hook");
  inq->add_option("--retrain-batch", demo.retrain_batch, "Mini-batch size of the retrain hook");
  auto* split_opt = inq->add_option("--mixed-split", split, "First tensor index using uniform quantization");
  inq->add_option("--widths", widths, "Comma-separated layer widths, e.g. 2,16,1");
  inq->add_option("--force-degradation", force, "Weight tensor whose freezing degrades the metric");

  std::uint64_t seed = 7;
  int train_steps = 5000;
  auto* toy = app.add_subcommand("toy-weights", "Train the toy network and write its float tensors");
  toy->add_option("--seed", seed);
  toy->add_option("--steps", train_steps);
  toy->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  return guarded(
      [&] {
        if (*quantize) {
          cmd_quantize(in, out, scheme, std::cout);
        } else if (*compress) {
          cmd_compress(in, out, group, std::cout);
        } else if (*decompress) {
          cmd_decompress(in, out, std::cout);
        } else if (*stats) {
          cmd_stats(in, std::cout);
        } else if (*hw) {
          cmd_hw_report(bits, discover, std::cout);
        } else if (*inq) {
          if (tau == "inf" || tau == "infinity") {
            demo.tau = std::numeric_limits<double>::infinity();
          } else {
            try {
              demo.tau = std::stod(tau);
            } catch (const std::exception&) {
              throw UsageError("bad --tau '" + tau + "'");
            }
          }
          if (*split_opt) demo.mixed_split = split;
          if (!widths.empty()) demo.widths = parse_widths(widths);
          if (!force.empty()) demo.force_degradation = force;
          cmd_inq_demo(demo, std::cout);
        } else if (*toy) {
          cmd_toy_weights(seed, train_steps, out, std::cout);
        }
      },
      std::cerr);
}
