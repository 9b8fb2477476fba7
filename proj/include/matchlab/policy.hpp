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

#ifndef MATCHLAB_POLICY_HPP_
#define MATCHLAB_POLICY_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/checkpoint.hpp"
#include "matchlab/env.hpp"
#include "matchlab/input_assembly.hpp"
#include "matchlab/mlp.hpp"
#include "matchlab/rng.hpp"
#include "matchlab/softmax.hpp"

namespace matchlab {

enum class DecodeMode { kSample, kGreedy };

const char* to_string(DecodeMode mode);

enum class PolicyKind {
  kGreedy,
  kGreedyRt,
  kGreedyT,
  kMsvv,
  kFf,
  kFfHist,
  kInvFf,
  kInvFfHist,
  kFfSupervised,
  kOracleReplay,
};

const char* to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

bool is_neural(PolicyKind kind);
InputKind input_kind(PolicyKind kind);
// Hidden layer sizes: three layers of 100 for ff kinds, two for inv kinds.
std::vector<int> default_hidden_layers(PolicyKind kind);

// How greedy-rt brings weights into the >= 1 range it needs.
enum class RtScaling { kDivideByMin, kMultiplyByMax };

struct PolicyModel {
  PolicyKind kind = PolicyKind::kGreedy;
  ProblemKind problem = ProblemKind::kEobm;

  // Neural kinds.
  MlpParams params;
  // Non-invariant neural kinds are bound to the |U| they were built for.
  std::optional<int> u_count;

  // greedy-t: threshold on values divided by `value_scale`.
  double threshold = 0.0;
  double value_scale = 1.0;

  // greedy-rt: values are multiplied by `rt_weight_scale`; `rt_w_max` is the
  // largest scaled weight.
  double rt_weight_scale = 1.0;
  double rt_w_max = 1.0;
};

// Fresh neural model with Glorot-initialized parameters.
PolicyModel make_neural_model(PolicyKind kind, ProblemKind problem, int u_count,
                              std::uint64_t seed, std::vector<int> hidden = {});

Checkpoint to_checkpoint(const PolicyModel& model);
PolicyModel from_checkpoint(const Checkpoint& ckpt);

// Per-episode policy state, created by Policy::begin_episode.
struct EpisodeContext {
  double tau = 1.0;
  const std::vector<int>* replay = nullptr;
};

struct Decision {
  int action = 0;
  double log_prob = 0.0;
  double entropy = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  // Throws ContractViolation when the policy cannot act on this instance.
  virtual void check_compatible(const BipartiteInstance& instance) const;

  virtual EpisodeContext begin_episode(const BipartiteInstance& instance, std::size_t index,
                                       Rng& rng) const;

  // Action distribution at the current arrival. Illegal slots carry exactly 0.
  virtual MaskedDistribution distribution(const EpisodeContext& ctx,
                                          const BipartiteInstance& instance,
                                          const EpisodeState& state) const = 0;

  // Baselines always sample their own distribution (one-hot except for
  // greedy-rt). Neural policies sample or take the argmax per `mode`.
  virtual Decision act(const EpisodeContext& ctx, const BipartiteInstance& instance,
                       const EpisodeState& state, Rng& rng, DecodeMode mode) const;
};

std::unique_ptr<Policy> make_policy(const PolicyModel& model);

// Replays fixed per-instance action sequences (slot indices, skip = u_count).
std::unique_ptr<Policy> make_replay_policy(std::vector<std::vector<int>> targets);

// Draws a slot from `d`, never an illegal one.
int sample_slot(const MaskedDistribution& d, Rng& rng);

struct TrajectoryStep {
  int action = 0;
  double log_prob = 0.0;
  double entropy = 0.0;
};

struct RolloutResult {
  Solution solution;
  std::vector<TrajectoryStep> trajectory;
};

// Runs one full episode (exactly |V| steps).
RolloutResult rollout(const BipartiteInstance& instance, const Policy& policy, DecodeMode mode,
                      Rng& rng, std::size_t instance_index = 0);

}  // namespace matchlab

#endif  // MATCHLAB_POLICY_HPP_
