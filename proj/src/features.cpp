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

#include "matchlab/features.hpp"

#include <algorithm>

namespace matchlab {

void FeatureState::reset(int n, int horizon_) {
  u_count = n;
  horizon = horizon_;
  t = 0;
  degree.assign(static_cast<std::size_t>(n + 1), 0);
  sum_w.assign(static_cast<std::size_t>(n + 1), 0.0);
  sumsq_w.assign(static_cast<std::size_t>(n + 1), 0.0);
  solution_size = 0;
  solution_sum = solution_sumsq = solution_max = solution_min = 0.0;
  matched_nodes = 0;
  skip_count = 0;
  max_weight_seen = 0.0;
}

void FeatureState::record(const Arrival& arrival, std::optional<double> matched_value,
                          bool first_match_of_node, double observed_max) {
  for (const Edge& e : arrival.edges) {
    const auto u = static_cast<std::size_t>(e.u);
    ++degree[u];
    sum_w[u] += e.w;
    sumsq_w[u] += e.w * e.w;
  }
  if (matched_value) {
    const double v = *matched_value;
    if (solution_size == 0) {
      solution_max = solution_min = v;
    } else {
      solution_max = std::max(solution_max, v);
      solution_min = std::min(solution_min, v);
    }
    ++solution_size;
    solution_sum += v;
    solution_sumsq += v * v;
    if (first_match_of_node) ++matched_nodes;
  } else {
    ++skip_count;
  }
  max_weight_seen = std::max(max_weight_seen, observed_max);
  ++t;
}

GraphFeatures graph_features(const FeatureState& s, const Arrival& arrival) {
  const auto slots = static_cast<std::size_t>(s.u_count + 1);
  GraphFeatures g{std::vector<double>(slots, 0.0), std::vector<double>(slots, 0.0),
                  std::vector<double>(slots, 0.0)};
  for (int u = 0; u < s.u_count; ++u) {
    const auto i = static_cast<std::size_t>(u);
    const int d = s.degree[i];
    if (d > 0) {
      const double mean = s.sum_w[i] / d;
      g.mean_weight[i] = mean;
      g.weight_variance[i] = std::max(0.0, s.sumsq_w[i] / d - mean * mean);
    }
  }
  const double arrivals_so_far = s.t + 1;
  for (int u = 0; u < s.u_count; ++u) {
    g.average_degree[static_cast<std::size_t>(u)] =
        s.degree[static_cast<std::size_t>(u)] / arrivals_so_far;
  }
  for (const Edge& e : arrival.edges) {
    g.average_degree[static_cast<std::size_t>(e.u)] += 1.0 / arrivals_so_far;
  }
  return g;
}

NodeFeatures node_features(const FeatureState& s, const Arrival& arrival) {
  NodeFeatures n;
  n.pct_incident = static_cast<double>(arrival.edges.size()) / s.u_count;
  n.step_fraction = static_cast<double>(s.t + 1) / s.horizon;
  return n;
}

std::array<double, kSolutionFeatureCount> solution_features(const FeatureState& s) {
  std::array<double, kSolutionFeatureCount> h{};
  if (s.solution_size > 0) {
    const double mean = s.solution_sum / s.solution_size;
    h[0] = s.solution_max;
    h[1] = s.solution_min;
    h[2] = mean;
    h[3] = std::max(0.0, s.solution_sumsq / s.solution_size - mean * mean);
  }
  h[4] = static_cast<double>(s.matched_nodes) / s.u_count;
  h[5] = s.t > 0 ? static_cast<double>(s.skip_count) / s.t : 0.0;
  h[6] = s.solution_sum / s.u_count;
  return h;
}

}  // namespace matchlab
