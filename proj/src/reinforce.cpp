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

#include "matchlab/reinforce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matchlab/error.hpp"
#include "matchlab/neural_policy.hpp"
#include "matchlab/parallel.hpp"

namespace matchlab {

RecordedEpisode record_episode(const PolicyModel& model, const BipartiteInstance& instance,
                               Rng& rng, DecodeMode mode) {
  check_neural_compatible(model, instance);
  RecordedEpisode ep;
  ep.steps.reserve(static_cast<std::size_t>(instance.horizon()));
  EpisodeState s = reset(instance);
  while (!s.terminal(instance)) {
    NeuralEvaluation ev = evaluate_neural(model, instance, s);
    const int a = mode == DecodeMode::kGreedy ? argmax_legal(ev.dist.log_probs, ev.mask)
                                              : sample_slot(ev.dist, rng);
    ep.entropy += ev.dist.entropy;
    ep.steps.push_back({std::move(ev.input), std::move(ev.mask), a});
    step(instance, s, a);
  }
  ep.reward = s.cumulative_reward;
  return ep;
}

namespace {

Eigen::MatrixXd stack_inputs(const RecordedEpisode& ep) {
  const auto& first = ep.steps.front().input;
  const Eigen::Index rows = first.rows();
  Eigen::MatrixXd x(rows * static_cast<Eigen::Index>(ep.steps.size()), first.cols());
  for (std::size_t s = 0; s < ep.steps.size(); ++s) {
    x.middleRows(static_cast<Eigen::Index>(s) * rows, rows) = ep.steps[s].input;
  }
  return x;
}

}  // namespace

Eigen::MatrixXd episode_logits(const PolicyModel& model, const RecordedEpisode& ep, Tape* tape) {
  const InputKind kind = input_kind(model.kind);
  const Eigen::MatrixXd out = forward(model.params, stack_inputs(ep), tape);
  const Eigen::Index steps = static_cast<Eigen::Index>(ep.steps.size());
  if (!is_invariant(kind)) return out;
  // Invariant nets emit one column; consecutive blocks of rows are steps.
  const Eigen::Index slots = out.rows() / steps;
  Eigen::MatrixXd z(steps, slots);
  for (Eigen::Index s = 0; s < steps; ++s) z.row(s) = out.block(s * slots, 0, slots, 1).transpose();
  return z;
}

Eigen::MatrixXd logits_to_output_grad(InputKind kind, const Eigen::MatrixXd& dlogits) {
  if (!is_invariant(kind)) return dlogits;
  Eigen::MatrixXd g(dlogits.rows() * dlogits.cols(), 1);
  for (Eigen::Index s = 0; s < dlogits.rows(); ++s) {
    g.block(s * dlogits.cols(), 0, dlogits.cols(), 1) = dlogits.row(s).transpose();
  }
  return g;
}

void BaselineState::update(double mean_cost, double beta) {
  if (!initialized) {
    value = mean_cost;
    initialized = true;
  } else {
    value = beta * value + (1.0 - beta) * mean_cost;
  }
  if (!std::isfinite(value)) throw NumericError("baseline became non-finite");
}

namespace {

struct EpisodeTerms {
  double log_prob_sum = 0.0;
  double entropy_sum = 0.0;
};

// Returns the log-prob and entropy sums and, when `dlogits` is given, fills it
// with d/dz of  advantage * sum log p - entropy_rate * sum H.
EpisodeTerms episode_terms(const RecordedEpisode& ep, const Eigen::MatrixXd& logits,
                           double advantage, double entropy_rate, Eigen::MatrixXd* dlogits) {
  EpisodeTerms terms;
  if (dlogits != nullptr) dlogits->setZero(logits.rows(), logits.cols());
  std::vector<double> z(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index s = 0; s < logits.rows(); ++s) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) z[static_cast<std::size_t>(j)] = logits(s, j);
    const RecordedStep& st = ep.steps[static_cast<std::size_t>(s)];
    const MaskedDistribution d = masked_softmax(z, st.mask);
    terms.log_prob_sum += d.log_probs[static_cast<std::size_t>(st.action)];
    terms.entropy_sum += d.entropy;
    if (dlogits == nullptr) continue;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      if (!st.mask[static_cast<std::size_t>(j)]) continue;
      const double p = d.probs[static_cast<std::size_t>(j)];
      double g = advantage * ((j == st.action ? 1.0 : 0.0) - p);
      if (p > 0.0) g += entropy_rate * p * (d.log_probs[static_cast<std::size_t>(j)] + d.entropy);
      (*dlogits)(s, j) = g;
    }
  }
  return terms;
}

}  // namespace

double surrogate_loss(const PolicyModel& model, const std::vector<RecordedEpisode>& batch,
                      double baseline, double entropy_rate) {
  double total = 0.0;
  for (const auto& ep : batch) {
    if (ep.steps.empty()) continue;
    const double advantage = -ep.reward - baseline;
    const auto terms = episode_terms(ep, episode_logits(model, ep), advantage, entropy_rate, nullptr);
    total += advantage * terms.log_prob_sum - entropy_rate * terms.entropy_sum;
  }
  return total / static_cast<double>(batch.size());
}

MlpParams surrogate_gradient(const PolicyModel& model, const std::vector<RecordedEpisode>& batch,
                             double baseline, double entropy_rate, double* loss) {
  const InputKind kind = input_kind(model.kind);
  const int n = static_cast<int>(batch.size());
  std::vector<MlpParams> grads(batch.size());
  std::vector<double> losses(batch.size(), 0.0);
  parallel_for(n, [&](int i) {
    const auto& ep = batch[static_cast<std::size_t>(i)];
    if (ep.steps.empty()) return;
    Tape tape;
    const Eigen::MatrixXd logits = episode_logits(model, ep, &tape);
    const double advantage = -ep.reward - baseline;
    Eigen::MatrixXd dz;
    const auto terms = episode_terms(ep, logits, advantage, entropy_rate, &dz);
    losses[static_cast<std::size_t>(i)] = advantage * terms.log_prob_sum - entropy_rate * terms.entropy_sum;
    grads[static_cast<std::size_t>(i)] = backward(model.params, tape, logits_to_output_grad(kind, dz));
  });
  MlpParams total = model.params.zeros_like();
  double loss_sum = 0.0;
  const double scale = 1.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    if (!grads[static_cast<std::size_t>(i)].layers.empty()) total.add_scaled(grads[static_cast<std::size_t>(i)], scale);
    loss_sum += losses[static_cast<std::size_t>(i)];
  }
  if (loss != nullptr) *loss = loss_sum * scale;
  return total;
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, {kStreamShuffle, static_cast<std::uint64_t>(epoch)});
  // Fisher-Yates with our own draws: std::shuffle's use of the engine is
  // implementation-defined.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::vector<BatchStats> reinforce_epoch(PolicyModel& model, const Dataset& dataset, int epoch,
                                        const ReinforceSettings& settings, BaselineState& baseline,
                                        AdamState& adam) {
  if (settings.batch_size <= 0) throw ConfigError("batch size must be positive");
  const auto order = epoch_order(dataset.size(), settings.seed, epoch);
  std::vector<BatchStats> stats;
  int batch_no = 0;
  for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(settings.batch_size)) {
    const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(settings.batch_size));
    std::vector<RecordedEpisode> batch(end - start);
    parallel_for(static_cast<int>(end - start), [&](int k) {
      const std::size_t idx = order[start + static_cast<std::size_t>(k)];
      Rng rng = make_rng(settings.seed, {kStreamEpisode, static_cast<std::uint64_t>(epoch), idx});
      batch[static_cast<std::size_t>(k)] = record_episode(model, dataset[idx], rng, DecodeMode::kSample);
    });
    double reward_sum = 0.0;
    double entropy_sum = 0.0;
    std::size_t step_count = 0;
    for (const auto& ep : batch) {
      reward_sum += ep.reward;
      entropy_sum += ep.entropy;
      step_count += ep.steps.size();
    }
    const double mean_cost = -reward_sum / static_cast<double>(batch.size());
    // The very first batch seeds the baseline before its own update.
    if (!baseline.initialized) baseline.update(mean_cost, settings.ema_decay);
    double loss = 0.0;
    const MlpParams grad = surrogate_gradient(model, batch, baseline.value, settings.entropy_rate, &loss);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite surrogate loss at epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(batch_no));
    }
    adam_step(model.params, grad, adam);
    baseline.update(mean_cost, settings.ema_decay);
    BatchStats st;
    st.epoch = epoch;
    st.batch = batch_no;
    st.mean_reward = reward_sum / static_cast<double>(batch.size());
    st.mean_cost = mean_cost;
    st.baseline = baseline.value;
    st.learning_rate = adam.learning_rate;
    st.entropy = step_count > 0 ? entropy_sum / static_cast<double>(step_count) : 0.0;
    stats.push_back(st);
    ++batch_no;
  }
  adam.learning_rate *= settings.lr_decay;
  return stats;
}

}  // namespace matchlab
