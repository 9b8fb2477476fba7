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

#ifndef MATCHLAB_NEURAL_POLICY_HPP_
#define MATCHLAB_NEURAL_POLICY_HPP_

#include <Eigen/Core>

#include "matchlab/policy.hpp"

namespace matchlab {

// Everything computed for one neural decision; training keeps `input` to
// recompute gradients later.
struct NeuralEvaluation {
  Eigen::MatrixXd input;
  Mask mask;
  MaskedDistribution dist;
};

// Network output -> one logit per slot. Invariant kinds produce a column
// (one row per slot), the others a single row.
std::vector<double> output_logits(InputKind kind, const Eigen::MatrixXd& output);

// Throws ContractViolation for a wrong payload kind or, for non-invariant
// kinds, a wrong |U|.
void check_neural_compatible(const PolicyModel& model, const BipartiteInstance& instance);

NeuralEvaluation evaluate_neural(const PolicyModel& model, const BipartiteInstance& instance,
                                 const EpisodeState& state);

class NeuralPolicy final : public Policy {
 public:
  explicit NeuralPolicy(PolicyModel model);

  std::string name() const override;
  void check_compatible(const BipartiteInstance& instance) const override;
  MaskedDistribution distribution(const EpisodeContext& ctx, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override;
  Decision act(const EpisodeContext& ctx, const BipartiteInstance& instance,
               const EpisodeState& state, Rng& rng, DecodeMode mode) const override;

  const PolicyModel& model() const { return model_; }

 private:
  PolicyModel model_;
};

}  // namespace matchlab

#endif  // MATCHLAB_NEURAL_POLICY_HPP_
