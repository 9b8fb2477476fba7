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

#ifndef MATCHLAB_BASELINES_HPP_
#define MATCHLAB_BASELINES_HPP_

#include "matchlab/env.hpp"
#include "matchlab/policy.hpp"
#include "matchlab/rng.hpp"

namespace matchlab {

// Legal fixed node with the largest current edge value, lowest index on ties;
// skip when none is legal.
int greedy_act(const BipartiteInstance& instance, const EpisodeState& state);

// |{0, ..., ceil(ln(w_max + 1)) - 1}|. Throws ConfigError if w_max <= 0.
int greedy_rt_threshold_count(double w_max);

// Per-episode threshold e^K with K uniform over the set above.
double greedy_rt_draw_threshold(double w_max, Rng& rng);

// Legal neighbours whose scaled value reaches tau.
std::vector<int> greedy_rt_candidates(const BipartiteInstance& instance, const EpisodeState& state,
                                      double tau, double weight_scale);

// Uniform pick among the candidates, skip if there are none.
int greedy_rt_act(const BipartiteInstance& instance, const EpisodeState& state, double tau,
                  double weight_scale, Rng& rng);

// Fits the greedy-rt weight scaling on a dataset.
void fit_greedy_rt(PolicyModel& model, const Dataset& dataset, RtScaling rule);

// Maximum-value legal neighbour among those with value / value_scale >= w_T.
int greedy_t_act(const BipartiteInstance& instance, const EpisodeState& state, double w_t,
                 double value_scale);

// Largest value any edge in the dataset could ever be worth.
double dataset_value_scale(const Dataset& dataset);

struct ThresholdTuning {
  double threshold = 0.01;
  double value_scale = 1.0;
  std::vector<double> mean_reward;  // one entry per grid value
};

// Grid {0.01, ..., 1.00}; best mean episode reward wins, smallest on ties.
ThresholdTuning tune_threshold(const Dataset& dataset);
ThresholdTuning tune_threshold_serial(const Dataset& dataset);

// MSVV trade-off 1 - e^(x - 1) of the spent budget fraction.
double msvv_tradeoff(double spent_fraction);

// argmax over legal u of bid * tradeoff(spent / budget); Adwords only.
int msvv_act(const BipartiteInstance& instance, const EpisodeState& state);

}  // namespace matchlab

#endif  // MATCHLAB_BASELINES_HPP_
