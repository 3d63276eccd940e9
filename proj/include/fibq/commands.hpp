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
#include <cstdint>
#include <ios>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibq::cli {

/// Bad flags or file access problems (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void cmd_quantize(const std::string& in, const std::string& out, const std::string& scheme, std::ostream& os);
void cmd_compress(const std::string& in, const std::string& out, std::size_t group, std::ostream& os);
void cmd_decompress(const std::string& in, const std::string& out, std::ostream& os);
void cmd_stats(const std::string& in, std::ostream& os);
void cmd_hw_report(int bits, bool discover, std::ostream& os);

struct InqDemoOptions {
  std::uint64_t seed = 7;
  double tau = 0.10;
  int steps = 1000;        // retrain steps per fraction
  int train_steps = 5000;  // float pre-training
  double learning_rate = 0.05;
  double retrain_learning_rate = 0.05;
  std::size_t retrain_batch = 128;
  std::optional<std::size_t> mixed_split;
  std::vector<std::size_t> widths;  // empty: default toy widths
  std::optional<std::string> force_degradation;
};

void cmd_inq_demo(const InqDemoOptions& options, std::ostream& os);

/// Trains the default toy network and writes its float weights and biases.
void cmd_toy_weights(std::uint64_t seed, int train_steps, const std::string& out, std::ostream& os);

/// Runs `body` and maps failures to exit codes: 0 success, 1 contract or
/// data error, 2 usage or I/O error.
template <typename F>
int guarded(F&& body, std::ostream& err) {
  try {
    body();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fibq::cli
