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

#ifndef MATCHLAB_FEATURES_HPP_
#define MATCHLAB_FEATURES_HPP_

#include <array>
#include <vector>

#include "matchlab/instance.hpp"

namespace matchlab {

// Running statistics behind the history features. Per-node arrays have
// u_count + 1 slots; the last slot is the skip node and stays zero.
struct FeatureState {
  int u_count = 0;
  int horizon = 0;
  // Decisions taken so far (= 0-based index of the arrival being decided).
  int t = 0;

  // Edges seen in arrivals strictly before the current one.
  std::vector<int> degree;
  std::vector<double> sum_w;
  std::vector<double> sumsq_w;

  // Values of the matches made so far.
  int solution_size = 0;
  double solution_sum = 0.0;
  double solution_sumsq = 0.0;
  double solution_max = 0.0;
  double solution_min = 0.0;

  // Distinct fixed nodes matched at least once.
  int matched_nodes = 0;
  int skip_count = 0;

  // Largest weight-valued quantity observed so far in the episode.
  double max_weight_seen = 0.0;

  void reset(int u_count, int horizon);

  // Folds in the decision for `arrival`. `matched_value` is the reward of the
  // match (nullopt for a skip); `first_match_of_node` marks the first time a
  // fixed node gets matched; `observed_max` is the largest weight-valued input
  // seen while deciding.
  void record(const Arrival& arrival, std::optional<double> matched_value,
              bool first_match_of_node, double observed_max);
};

struct GraphFeatures {
  std::vector<double> mean_weight;
  std::vector<double> weight_variance;
  std::vector<double> average_degree;
};

// Per-node history up to the current arrival. Mean and variance cover arrivals
// strictly before it; the degree ratio includes it. Entries are raw, i.e. not
// normalized by the running weight scale.
GraphFeatures graph_features(const FeatureState& state, const Arrival& arrival);

struct NodeFeatures {
  double pct_incident = 0.0;
  double step_fraction = 0.0;
};

NodeFeatures node_features(const FeatureState& state, const Arrival& arrival);

// (max, min, mean, variance, matched-node ratio, skip ratio, p_t), raw.
inline constexpr int kSolutionFeatureCount = 7;
std::array<double, kSolutionFeatureCount> solution_features(const FeatureState& state);

}  // namespace matchlab

#endif  // MATCHLAB_FEATURES_HPP_
