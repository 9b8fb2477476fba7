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

#ifndef MATCHLAB_SUPERVISED_HPP_
#define MATCHLAB_SUPERVISED_HPP_

#include <vector>

#include "matchlab/adam.hpp"
#include "matchlab/reinforce.hpp"

namespace matchlab {

// Inputs along the oracle trajectory with the oracle's action as label.
// `class_weight[s]` is 1 for match targets and |U|/|V| for Skip.
struct LabeledEpisode {
  RecordedEpisode episode;
  std::vector<double> class_weight;
};

double skip_class_weight(const BipartiteInstance& instance);

// Throws DataError naming the instance and timestep when a target is illegal.
LabeledEpisode label_episode(const PolicyModel& model, const BipartiteInstance& instance,
                             const std::vector<int>& targets, std::size_t instance_index);

std::vector<LabeledEpisode> label_dataset(const PolicyModel& model, const Dataset& dataset,
                                          const std::vector<std::vector<int>>& targets);

// (1/(N*T)) * sum_i sum_t  -c_t log p(target_t); N = episodes, T = horizon.
double weighted_cross_entropy(const PolicyModel& model, const std::vector<LabeledEpisode>& batch);

MlpParams weighted_cross_entropy_gradient(const PolicyModel& model,
                                          const std::vector<LabeledEpisode>& batch,
                                          double* loss = nullptr);

struct SupervisedStats {
  int epoch = 0;
  int batch = 0;
  double loss = 0.0;
  double learning_rate = 0.0;
};

std::vector<SupervisedStats> supervised_epoch(PolicyModel& model,
                                              const std::vector<LabeledEpisode>& data, int epoch,
                                              int batch_size, double lr_decay, std::uint64_t seed,
                                              AdamState& adam);

}  // namespace matchlab

#endif  // MATCHLAB_SUPERVISED_HPP_
