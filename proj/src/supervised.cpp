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

#include "matchlab/supervised.hpp"

#include <cmath>

#include "matchlab/error.hpp"
#include "matchlab/neural_policy.hpp"
#include "matchlab/parallel.hpp"

namespace matchlab {

double skip_class_weight(const BipartiteInstance& instance) {
  return static_cast<double>(instance.u_count()) / static_cast<double>(instance.horizon());
}

LabeledEpisode label_episode(const PolicyModel& model, const BipartiteInstance& instance,
                             const std::vector<int>& targets, std::size_t instance_index) {
  check_neural_compatible(model, instance);
  if (static_cast<int>(targets.size()) != instance.horizon()) {
    throw DataError("instance " + std::to_string(instance_index) + ": " + std::to_string(targets.size()) +
                    " targets for horizon " + std::to_string(instance.horizon()));
  }
  const InputKind kind = input_kind(model.kind);
  const int skip = skip_action(instance);
  const double c_skip = skip_class_weight(instance);
  LabeledEpisode out;
  EpisodeState s = reset(instance);
  while (!s.terminal(instance)) {
    const int a = targets[static_cast<std::size_t>(s.t)];
    Mask mask = legal_mask(instance, s);
    if (a < 0 || a > skip || !mask[static_cast<std::size_t>(a)]) {
      throw DataError("instance " + std::to_string(instance_index) + ", timestep " + std::to_string(s.t) +
                      ": target " + std::to_string(a) + " is not a legal action");
    }
    out.episode.steps.push_back({assemble_input(kind, instance, s), std::move(mask), a});
    out.class_weight.push_back(a == skip ? c_skip : 1.0);
    step(instance, s, a);
  }
  out.episode.reward = s.cumulative_reward;
  return out;
}

std::vector<LabeledEpisode> label_dataset(const PolicyModel& model, const Dataset& dataset,
                                          const std::vector<std::vector<int>>& targets) {
  if (targets.size() != dataset.size()) throw DataError("target count does not match dataset size");
  std::vector<LabeledEpisode> out(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = label_episode(model, dataset[k], targets[k], k);
  });
  return out;
}

namespace {

// Sum over steps of -c log p(target); fills d/dz when requested.
double episode_ce(const LabeledEpisode& le, const Eigen::MatrixXd& logits, Eigen::MatrixXd* dlogits) {
  double total = 0.0;
  if (dlogits != nullptr) dlogits->setZero(logits.rows(), logits.cols());
  std::vector<double> z(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index s = 0; s < logits.rows(); ++s) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) z[static_cast<std::size_t>(j)] = logits(s, j);
    const RecordedStep& st = le.episode.steps[static_cast<std::size_t>(s)];
    const double c = le.class_weight[static_cast<std::size_t>(s)];
    const MaskedDistribution d = masked_softmax(z, st.mask);
    total -= c * d.log_probs[static_cast<std::size_t>(st.action)];
    if (dlogits == nullptr) continue;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      if (!st.mask[static_cast<std::size_t>(j)]) continue;
      (*dlogits)(s, j) = c * (d.probs[static_cast<std::size_t>(j)] - (j == st.action ? 1.0 : 0.0));
    }
  }
  return total;
}

double normalizer(const std::vector<LabeledEpisode>& batch) {
  std::size_t steps = 0;
  for (const auto& le : batch) steps = std::max(steps, le.episode.steps.size());
  return static_cast<double>(batch.size()) * static_cast<double>(std::max<std::size_t>(steps, 1));
}

}  // namespace

double weighted_cross_entropy(const PolicyModel& model, const std::vector<LabeledEpisode>& batch) {
  double total = 0.0;
  for (const auto& le : batch) {
    if (le.episode.steps.empty()) continue;
    total += episode_ce(le, episode_logits(model, le.episode), nullptr);
  }
  return total / normalizer(batch);
}

MlpParams weighted_cross_entropy_gradient(const PolicyModel& model,
                                          const std::vector<LabeledEpisode>& batch, double* loss) {
  const InputKind kind = input_kind(model.kind);
  std::vector<MlpParams> grads(batch.size());
  std::vector<double> losses(batch.size(), 0.0);
  parallel_for(static_cast<int>(batch.size()), [&](int i) {
    const auto& le = batch[static_cast<std::size_t>(i)];
    if (le.episode.steps.empty()) return;
    Tape tape;
    const Eigen::MatrixXd logits = episode_logits(model, le.episode, &tape);
    Eigen::MatrixXd dz;
    losses[static_cast<std::size_t>(i)] = episode_ce(le, logits, &dz);
    grads[static_cast<std::size_t>(i)] = backward(model.params, tape, logits_to_output_grad(kind, dz));
  });
  const double scale = 1.0 / normalizer(batch);
  MlpParams total = model.params.zeros_like();
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!grads[i].layers.empty()) total.add_scaled(grads[i], scale);
    loss_sum += losses[i];
  }
  if (loss != nullptr) *loss = loss_sum * scale;
  return total;
}

std::vector<SupervisedStats> supervised_epoch(PolicyModel& model,
                                              const std::vector<LabeledEpisode>& data, int epoch,
                                              int batch_size, double lr_decay, std::uint64_t seed,
                                              AdamState& adam) {
  if (batch_size <= 0) throw ConfigError("batch size must be positive");
  const auto order = epoch_order(data.size(), seed, epoch);
  std::vector<SupervisedStats> stats;
  int batch_no = 0;
  for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(batch_size));
    std::vector<LabeledEpisode> batch;
    batch.reserve(end - start);
    for (std::size_t k = start; k < end; ++k) batch.push_back(data[order[k]]);
    double loss = 0.0;
    const MlpParams grad = weighted_cross_entropy_gradient(model, batch, &loss);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite cross-entropy at epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(batch_no));
    }
    adam_step(model.params, grad, adam);
    stats.push_back({epoch, batch_no, loss, adam.learning_rate});
    ++batch_no;
  }
  adam.learning_rate *= lr_decay;
  return stats;
}

}  // namespace matchlab
