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

#ifndef MATCHLAB_TRAINER_HPP_
#define MATCHLAB_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matchlab/checkpoint.hpp"
#include "matchlab/oracle.hpp"
#include "matchlab/policy.hpp"
#include "matchlab/reinforce.hpp"

namespace matchlab {

struct TrainConfig {
  int epochs = 300;
  // Upper bound on the number of training instances used.
  int dataset_size = 20000;
  int batch_size = 200;
  double learning_rate = 1e-3;
  double lr_decay = 0.98;
  double ema_decay = 0.8;
  double entropy_rate = 1e-3;
  std::uint64_t seed = 0;
  // Validate every this many epochs; 0 disables validation.
  int eval_every = 1;
  std::vector<int> hidden;

  // Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static TrainConfig from_json(const nlohmann::json& j);
};

struct TrainRun {
  PolicyKind kind = PolicyKind::kInvFfHist;
  TrainConfig config;
  const Dataset* train = nullptr;
  const Dataset* validation = nullptr;
  const std::vector<OracleResult>* validation_oracle = nullptr;
  // Supervised kinds: one target sequence per training instance.
  const std::vector<std::vector<int>>* targets = nullptr;
  // Continue from a checkpoint written by a previous run.
  const Checkpoint* resume = nullptr;
  // When set: train_log.csv, validation.csv, last.ckpt.json, best.ckpt.json.
  std::filesystem::path out_dir;
};

struct TrainOutcome {
  PolicyModel last;
  PolicyModel best;
  double best_validation = -1.0;
  int epochs_done = 0;
  std::vector<BatchStats> log;
  std::vector<std::pair<int, double>> validation;  // (epochs done, mean ratio)
};

TrainOutcome train(const TrainRun& run);

double validation_ratio(const PolicyModel& model, const Dataset& dataset,
                        const std::vector<OracleResult>& oracle, std::uint64_t seed);

}  // namespace matchlab

#endif  // MATCHLAB_TRAINER_HPP_
