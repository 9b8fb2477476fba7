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

#include "matchlab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "matchlab/error.hpp"
#include "matchlab/parallel.hpp"

namespace matchlab {

int greedy_act(const BipartiteInstance& instance, const EpisodeState& state) {
  int best = skip_action(instance);
  double best_value = 0.0;
  for (const Edge& e : instance.arrival(state.t).edges) {
    if (!state.available[static_cast<std::size_t>(e.u)]) continue;
    const double v = edge_value(instance, state, e.u);
    if (best == skip_action(instance) || v > best_value) {
      best = e.u;
      best_value = v;
    }
  }
  return best;
}

int greedy_rt_threshold_count(double w_max) {
  if (!(w_max > 0.0) || !std::isfinite(w_max)) throw ConfigError("greedy-rt: w_max must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::log(w_max + 1.0))));
}

double greedy_rt_draw_threshold(double w_max, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, greedy_rt_threshold_count(w_max) - 1);
  return std::exp(static_cast<double>(pick(rng)));
}

std::vector<int> greedy_rt_candidates(const BipartiteInstance& instance, const EpisodeState& state,
                                      double tau, double weight_scale) {
  std::vector<int> out;
  for (const Edge& e : instance.arrival(state.t).edges) {
    if (!state.available[static_cast<std::size_t>(e.u)]) continue;
    if (edge_value(instance, state, e.u) * weight_scale >= tau) out.push_back(e.u);
  }
  return out;
}

int greedy_rt_act(const BipartiteInstance& instance, const EpisodeState& state, double tau,
                  double weight_scale, Rng& rng) {
  const auto candidates = greedy_rt_candidates(instance, state, tau, weight_scale);
  if (candidates.empty()) return skip_action(instance);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)];
}

void fit_greedy_rt(PolicyModel& model, const Dataset& dataset, RtScaling rule) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& inst : dataset) {
    for (const auto& a : inst.arrivals()) {
      for (const Edge& e : a.edges) {
        lo = std::min(lo, e.w);
        hi = std::max(hi, e.w);
      }
    }
  }
  if (!(hi > 0.0)) throw ConfigError("greedy-rt: dataset has no edges");
  if (rule == RtScaling::kDivideByMin) {
    model.rt_weight_scale = 1.0 / lo;
  } else {
    model.rt_weight_scale = hi;
  }
  model.rt_w_max = hi * model.rt_weight_scale;
}

int greedy_t_act(const BipartiteInstance& instance, const EpisodeState& state, double w_t,
                 double value_scale) {
  int best = skip_action(instance);
  double best_value = 0.0;
  for (const Edge& e : instance.arrival(state.t).edges) {
    if (!state.available[static_cast<std::size_t>(e.u)]) continue;
    const double v = edge_value(instance, state, e.u);
    if (v / value_scale < w_t) continue;
    if (best == skip_action(instance) || v > best_value) {
      best = e.u;
      best_value = v;
    }
  }
  return best;
}

double dataset_value_scale(const Dataset& dataset) {
  double scale = 0.0;
  for (const auto& inst : dataset) {
    for (const auto& a : inst.arrivals()) {
      for (const Edge& e : a.edges) {
        if (inst.kind() == ProblemKind::kOsbm) {
          scale = std::max(scale, coverage_value(inst.osbm(), *a.user, {e.u}));
        } else {
          scale = std::max(scale, e.w);
        }
      }
    }
  }
  return scale > 0.0 ? scale : 1.0;
}

namespace {

constexpr int kGridSize = 100;

double grid_value(int k) { return static_cast<double>(k + 1) / 100.0; }

double greedy_t_episode(const BipartiteInstance& inst, double w_t, double scale) {
  EpisodeState s = reset(inst);
  while (!s.terminal(inst)) step(inst, s, greedy_t_act(inst, s, w_t, scale));
  return s.cumulative_reward;
}

ThresholdTuning pick_best(std::vector<std::vector<double>> per_instance, double scale) {
  ThresholdTuning out;
  out.value_scale = scale;
  out.mean_reward.assign(kGridSize, 0.0);
  for (const auto& row : per_instance) {
    for (int k = 0; k < kGridSize; ++k) out.mean_reward[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
  }
  int best = 0;
  for (int k = 0; k < kGridSize; ++k) {
    out.mean_reward[static_cast<std::size_t>(k)] /= static_cast<double>(per_instance.size());
    if (out.mean_reward[static_cast<std::size_t>(k)] > out.mean_reward[static_cast<std::size_t>(best)]) best = k;
  }
  out.threshold = grid_value(best);
  return out;
}

}  // namespace

ThresholdTuning tune_threshold_serial(const Dataset& dataset) {
  if (dataset.empty()) throw ConfigError("tune_threshold: empty dataset");
  const double scale = dataset_value_scale(dataset);
  std::vector<std::vector<double>> rewards(dataset.size(), std::vector<double>(kGridSize));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (int k = 0; k < kGridSize; ++k) rewards[i][static_cast<std::size_t>(k)] = greedy_t_episode(dataset[i], grid_value(k), scale);
  }
  return pick_best(std::move(rewards), scale);
}

ThresholdTuning tune_threshold(const Dataset& dataset) {
  if (dataset.empty()) throw ConfigError("tune_threshold: empty dataset");
  const double scale = dataset_value_scale(dataset);
  std::vector<std::vector<double>> rewards(dataset.size(), std::vector<double>(kGridSize));
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    for (int k = 0; k < kGridSize; ++k) {
      rewards[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          greedy_t_episode(dataset[static_cast<std::size_t>(i)], grid_value(k), scale);
    }
  });
  return pick_best(std::move(rewards), scale);
}

double msvv_tradeoff(double spent_fraction) { return 1.0 - std::exp(spent_fraction - 1.0); }

int msvv_act(const BipartiteInstance& instance, const EpisodeState& state) {
  if (instance.kind() != ProblemKind::kAdwords) throw ContractViolation("msvv: Adwords instances only");
  const auto& budgets = instance.adwords().budgets;
  int best = skip_action(instance);
  double best_score = 0.0;
  for (const Edge& e : instance.arrival(state.t).edges) {
    const auto u = static_cast<std::size_t>(e.u);
    if (!state.available[u]) continue;
    const double spent = budgets[u] - state.remaining[u];
    const double score = e.w * msvv_tradeoff(spent / budgets[u]);
    if (best == skip_action(instance) || score > best_score) {
      best = e.u;
      best_score = score;
    }
  }
  return best;
}

}  // namespace matchlab
