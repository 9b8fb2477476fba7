// Copyright 2026 The matchlab Authors
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

#ifndef MATCHLAB_CHECKPOINT_HPP_
#define MATCHLAB_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "matchlab/adam.hpp"
#include "matchlab/mlp.hpp"

namespace matchlab {

// Optimizer and schedule state needed to resume training bit-for-bit.
struct TrainingSnapshot {
  int epochs_done = 0;
  double learning_rate = 0.0;
  double baseline = 0.0;
  bool baseline_initialized = false;
  AdamState adam;
  double best_validation = -1.0;
};

// Self-describing model container shared by neural and baseline policies.
// Parameter arrays are written with 17 significant digits.
struct Checkpoint {
  std::string kind;
  std::string problem;
  std::optional<int> u_count;
  std::optional<MlpParams> params;
  nlohmann::json scalars = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seed_lineage;
  std::optional<TrainingSnapshot> training;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace matchlab

#endif  // MATCHLAB_CHECKPOINT_HPP_
