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

#include "matchlab/input_assembly.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "matchlab/error.hpp"

namespace matchlab {

const char* to_string(InputKind kind) {
  switch (kind) {
    case InputKind::kFf:
      return "ff";
    case InputKind::kFfHist:
      return "ff_hist";
    case InputKind::kInvFf:
      return "inv_ff";
    case InputKind::kInvFfHist:
      return "inv_ff_hist";
  }
  return "?";
}

InputKind parse_input_kind(const std::string& name) {
  if (name == "ff") return InputKind::kFf;
  if (name == "ff_hist") return InputKind::kFfHist;
  if (name == "inv_ff") return InputKind::kInvFf;
  if (name == "inv_ff_hist") return InputKind::kInvFfHist;
  throw ConfigError("unknown input kind '" + name + "'");
}

bool is_invariant(InputKind kind) { return kind == InputKind::kInvFf || kind == InputKind::kInvFfHist; }

int input_width(InputKind kind, ProblemKind problem, int u_count) {
  const bool adwords = problem == ProblemKind::kAdwords;
  const int slots = u_count + 1;
  switch (kind) {
    case InputKind::kFf:
      return 2 * slots + (adwords ? slots : 0);
    case InputKind::kFfHist:
      return 5 * slots + 8 + (adwords ? 2 * slots : 0);
    case InputKind::kInvFf:
      return 3 + (adwords ? 1 : 0);
    case InputKind::kInvFfHist:
      return 16 + (adwords ? 2 : 0);
  }
  throw ConfigError("unknown input kind");
}

double input_weight(const BipartiteInstance& instance, const EpisodeState& state, int u) {
  const Arrival& a = instance.arrival(state.t);
  const Edge* e = a.find(u);
  if (e == nullptr) return 0.0;
  if (instance.kind() == ProblemKind::kOsbm) {
    return marginal_gain(instance.osbm(), *a.user, state.covered[static_cast<std::size_t>(*a.user)], u);
  }
  return e->w;
}

double weight_scale(const BipartiteInstance& instance, const EpisodeState& state) {
  double scale = state.features.max_weight_seen;
  for (const Edge& e : instance.arrival(state.t).edges) {
    scale = std::max(scale, e.w);
    scale = std::max(scale, input_weight(instance, state, e.u));
  }
  return scale > 0.0 ? scale : 1.0;
}

namespace {

// Sum in ascending order so the result does not depend on node labels.
double label_free_sum(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

Eigen::MatrixXd assemble_input(InputKind kind, const BipartiteInstance& instance,
                               const EpisodeState& state) {
  const int n = instance.u_count();
  const int slots = n + 1;
  const auto us = static_cast<std::size_t>(slots);
  const bool adwords = instance.kind() == ProblemKind::kAdwords;
  const Arrival& arrival = instance.arrival(state.t);
  const double scale = weight_scale(instance, state);

  std::vector<double> w(us, 0.0);
  std::vector<double> edge_weights;
  for (const Edge& e : arrival.edges) {
    const double x = input_weight(instance, state, e.u) / scale;
    w[static_cast<std::size_t>(e.u)] = x;
    edge_weights.push_back(x);
  }
  const double w_mean =
      edge_weights.empty() ? 0.0 : label_free_sum(edge_weights) / static_cast<double>(edge_weights.size());

  std::vector<double> m(us, 1.0);
  for (int u = 0; u < n; ++u) m[static_cast<std::size_t>(u)] = state.available[static_cast<std::size_t>(u)] ? 1.0 : 0.0;

  std::vector<double> remaining(us, 0.0);
  std::vector<double> initial(us, 0.0);
  double spend_norm = 1.0;
  if (adwords) {
    const auto& budgets = instance.adwords().budgets;
    const double b_max = *std::max_element(budgets.begin(), budgets.end());
    for (int u = 0; u < n; ++u) {
      remaining[static_cast<std::size_t>(u)] = state.remaining[static_cast<std::size_t>(u)] / b_max;
      initial[static_cast<std::size_t>(u)] = budgets[static_cast<std::size_t>(u)] / b_max;
    }
    spend_norm = label_free_sum(budgets);
  }

  const bool hist = kind == InputKind::kFfHist || kind == InputKind::kInvFfHist;
  GraphFeatures g;
  NodeFeatures nf;
  std::array<double, kSolutionFeatureCount> h{};
  if (hist) {
    g = graph_features(state.features, arrival);
    nf = node_features(state.features, arrival);
    h = solution_features(state.features);
    const double s2 = scale * scale;
    for (auto& x : g.mean_weight) x /= scale;
    for (auto& x : g.weight_variance) x /= s2;
    h[0] /= scale;
    h[1] /= scale;
    h[2] /= scale;
    h[3] /= s2;
    h[6] = adwords ? state.features.solution_sum / spend_norm : h[6] / scale;
  }

  const int width = input_width(kind, instance.kind(), n);
  if (!is_invariant(kind)) {
    Eigen::MatrixXd x(1, width);
    int c = 0;
    auto put = [&](double v) { x(0, c++) = v; };
    for (double v : w) put(v);
    if (kind == InputKind::kFf) {
      for (double v : m) put(v);
      if (adwords) {
        for (double v : remaining) put(v);
      }
    } else {
      for (double v : m) put(v);
      for (double v : h) put(v);
      for (double v : g.mean_weight) put(v);
      for (double v : g.weight_variance) put(v);
      for (double v : g.average_degree) put(v);
      put(nf.step_fraction);
      if (adwords) {
        for (double v : remaining) put(v);
        for (double v : initial) put(v);
      }
    }
    return x;
  }

  Eigen::MatrixXd x(slots, width);
  for (int u = 0; u < slots; ++u) {
    const auto i = static_cast<std::size_t>(u);
    const double is_skip = u == n ? 1.0 : 0.0;
    int c = 0;
    auto put = [&](double v) { x(u, c++) = v; };
    if (kind == InputKind::kInvFf) {
      put(w[i]);
      put(is_skip);
      put(w_mean);
      if (adwords) put(remaining[i]);
    } else {
      put(w[i]);
      put(m[i]);
      put(is_skip);
      put(w_mean);
      put(nf.pct_incident);
      put(nf.step_fraction);
      put(g.mean_weight[i]);
      put(g.weight_variance[i]);
      put(g.average_degree[i]);
      for (double v : h) put(v);
      if (adwords) {
        put(remaining[i]);
        put(initial[i]);
      }
    }
  }
  return x;
}

}  // namespace matchlab
