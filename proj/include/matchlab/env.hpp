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

#ifndef MATCHLAB_ENV_HPP_
#define MATCHLAB_ENV_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "matchlab/features.hpp"
#include "matchlab/instance.hpp"

namespace matchlab {

// Slot-indexed legality: entries 0..u_count-1 are fixed nodes, entry u_count
// is the skip action.
using Mask = std::vector<char>;

// Live state of one episode. Single owner; advanced in place by step().
struct EpisodeState {
  int t = 0;
  std::vector<char> available;
  std::vector<std::pair<int, int>> matched_pairs;  // (t, u)
  std::vector<std::optional<int>> decisions;
  double cumulative_reward = 0.0;
  // OSBM: covered[user][genre].
  std::vector<std::vector<char>> covered;
  // Adwords: remaining budget per fixed node.
  std::vector<double> remaining;
  // Distinct fixed nodes matched at least once (Adwords may repeat a node).
  std::vector<char> ever_matched;
  FeatureState features;

  bool terminal(const BipartiteInstance& instance) const { return t >= instance.horizon(); }
};

EpisodeState reset(const BipartiteInstance& instance);

int skip_action(const BipartiteInstance& instance);

// Skip is always legal. Fixed node u is legal iff it neighbours the current
// arrival and is still available (Adwords: remaining budget > 0).
Mask legal_mask(const BipartiteInstance& instance, const EpisodeState& state);

// OSBM marginal coverage of movie u for `user` given the current coverage.
double marginal_gain(const OsbmPayload& payload, int user, const std::vector<char>& covered_by_user,
                     int u);

// Reward that matching the current arrival to u would earn right now:
// E-OBM weight, OSBM marginal coverage, Adwords min(bid, remaining).
// u must neighbour the current arrival.
double edge_value(const BipartiteInstance& instance, const EpisodeState& state, int u);

// Applies `action` to the current arrival and returns the reward. Illegal
// actions throw ContractViolation.
double step(const BipartiteInstance& instance, EpisodeState& state, int action);

Solution to_solution(const EpisodeState& state);

// From-scratch objective of a decision sequence, independent of step():
// E-OBM sum of weights, OSBM sum over users of covered rating mass, Adwords
// total spend with budgets capped. Feasibility is not checked.
double recompute_objective(const BipartiteInstance& instance,
                           const std::vector<std::optional<int>>& decisions);

}  // namespace matchlab

#endif  // MATCHLAB_ENV_HPP_
