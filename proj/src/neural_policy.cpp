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

#include "matchlab/neural_policy.hpp"

#include "matchlab/error.hpp"

namespace matchlab {

std::vector<double> output_logits(InputKind kind, const Eigen::MatrixXd& output) {
  std::vector<double> z;
  if (is_invariant(kind)) {
    z.resize(static_cast<std::size_t>(output.rows()));
    for (Eigen::Index i = 0; i < output.rows(); ++i) z[static_cast<std::size_t>(i)] = output(i, 0);
  } else {
    z.resize(static_cast<std::size_t>(output.cols()));
    for (Eigen::Index i = 0; i < output.cols(); ++i) z[static_cast<std::size_t>(i)] = output(0, i);
  }
  return z;
}

void check_neural_compatible(const PolicyModel& model, const BipartiteInstance& instance) {
  if (instance.kind() != model.problem) {
    throw ContractViolation(std::string(to_string(model.kind)) + " model built for " +
                            to_string(model.problem) + " cannot act on " + to_string(instance.kind()));
  }
  if (!is_invariant(input_kind(model.kind)) && model.u_count && *model.u_count != instance.u_count()) {
    throw ContractViolation(std::string(to_string(model.kind)) + " model is bound to |U| = " +
                            std::to_string(*model.u_count) + ", instance has " +
                            std::to_string(instance.u_count()));
  }
}

NeuralEvaluation evaluate_neural(const PolicyModel& model, const BipartiteInstance& instance,
                                 const EpisodeState& state) {
  const InputKind kind = input_kind(model.kind);
  NeuralEvaluation ev;
  ev.input = assemble_input(kind, instance, state);
  ev.mask = legal_mask(instance, state);
  const auto logits = output_logits(kind, forward(model.params, ev.input));
  ev.dist = masked_softmax(logits, ev.mask);
  return ev;
}

NeuralPolicy::NeuralPolicy(PolicyModel model) : model_(std::move(model)) {
  if (!is_neural(model_.kind)) throw ContractViolation("NeuralPolicy needs a neural model");
}

std::string NeuralPolicy::name() const { return to_string(model_.kind); }

void NeuralPolicy::check_compatible(const BipartiteInstance& instance) const {
  check_neural_compatible(model_, instance);
}

MaskedDistribution NeuralPolicy::distribution(const EpisodeContext&, const BipartiteInstance& instance,
                                              const EpisodeState& state) const {
  return evaluate_neural(model_, instance, state).dist;
}

Decision NeuralPolicy::act(const EpisodeContext& ctx, const BipartiteInstance& instance,
                           const EpisodeState& state, Rng& rng, DecodeMode mode) const {
  const MaskedDistribution d = distribution(ctx, instance, state);
  const int a = mode == DecodeMode::kGreedy ? argmax_legal(d.log_probs, legal_mask(instance, state))
                                            : sample_slot(d, rng);
  return {a, d.log_probs[static_cast<std::size_t>(a)], d.entropy};
}

}  // namespace matchlab
