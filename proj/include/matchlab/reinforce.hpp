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

#ifndef MATCHLAB_REINFORCE_HPP_
#define MATCHLAB_REINFORCE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "matchlab/adam.hpp"
#include "matchlab/policy.hpp"

namespace matchlab {

// One decision with the network input that produced it. Inputs depend only on
// the environment state, so a recorded episode is a fixed function of the
// parameters and can be re-evaluated exactly.
struct RecordedStep {
  Eigen::MatrixXd input;
  Mask mask;
  int action = 0;
};

struct RecordedEpisode {
  std::vector<RecordedStep> steps;
  double reward = 0.0;
  double entropy = 0.0;  // summed over steps
};

RecordedEpisode record_episode(const PolicyModel& model, const BipartiteInstance& instance,
                               Rng& rng, DecodeMode mode = DecodeMode::kSample);

// Forward pass over every step of an episode at once. Returns per-step logits
// (rows = steps, cols = slots).
Eigen::MatrixXd episode_logits(const PolicyModel& model, const RecordedEpisode& ep,
                               Tape* tape = nullptr);

// Maps per-step logit gradients back to the network's output layout.
Eigen::MatrixXd logits_to_output_grad(InputKind kind, const Eigen::MatrixXd& dlogits);

struct BaselineState {
  double value = 0.0;
  bool initialized = false;

  // First call sets the value; afterwards b <- beta*b + (1-beta)*mean_cost.
  void update(double mean_cost, double beta);
};

// Batch surrogate: mean over episodes of
//   (cost - b) * sum_t log p(a_t) - entropy_rate * sum_t H_t,  cost = -reward.
double surrogate_loss(const PolicyModel& model, const std::vector<RecordedEpisode>& batch,
                      double baseline, double entropy_rate);

// Gradient of surrogate_loss. Per-episode gradients are computed on the
// worker pool and summed in batch order.
MlpParams surrogate_gradient(const PolicyModel& model, const std::vector<RecordedEpisode>& batch,
                             double baseline, double entropy_rate, double* loss = nullptr);

struct ReinforceSettings {
  int batch_size = 200;
  double ema_decay = 0.8;
  double entropy_rate = 1e-3;
  double lr_decay = 0.98;
  std::uint64_t seed = 0;
};

struct BatchStats {
  int epoch = 0;
  int batch = 0;
  double mean_reward = 0.0;
  double mean_cost = 0.0;
  double baseline = 0.0;
  double learning_rate = 0.0;
  double entropy = 0.0;  // mean per-step entropy
};

// One pass over `dataset` in a seeded shuffled order. Episode streams are keyed
// by (seed, epoch, dataset index), so results do not depend on worker count.
std::vector<BatchStats> reinforce_epoch(PolicyModel& model, const Dataset& dataset, int epoch,
                                        const ReinforceSettings& settings, BaselineState& baseline,
                                        AdamState& adam);

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch);

}  // namespace matchlab

#endif  // MATCHLAB_REINFORCE_HPP_
