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

#include "matchlab/env.hpp"

#include <algorithm>
#include <map>

#include "matchlab/error.hpp"

namespace matchlab {

namespace {

// Remaining budgets within this relative distance of a bid are spent in full,
// so budgets that are exact multiples of the bid drain to exactly zero.
constexpr double kBudgetSlack = 1e-12;

}  // namespace

EpisodeState reset(const BipartiteInstance& instance) {
  const int n = instance.u_count();
  EpisodeState s;
  s.available.assign(static_cast<std::size_t>(n), 1);
  s.ever_matched.assign(static_cast<std::size_t>(n), 0);
  s.decisions.reserve(static_cast<std::size_t>(instance.horizon()));
  switch (instance.kind()) {
    case ProblemKind::kEobm:
      break;
    case ProblemKind::kOsbm: {
      const auto& p = instance.osbm();
      s.covered.assign(p.user_weights.size(), std::vector<char>(static_cast<std::size_t>(p.genre_count), 0));
      break;
    }
    case ProblemKind::kAdwords:
      s.remaining = instance.adwords().budgets;
      break;
  }
  s.features.reset(n, instance.horizon());
  return s;
}

int skip_action(const BipartiteInstance& instance) { return instance.u_count(); }

Mask legal_mask(const BipartiteInstance& instance, const EpisodeState& state) {
  if (state.terminal(instance)) throw ContractViolation("legal_mask on a terminal state");
  Mask mask(static_cast<std::size_t>(instance.u_count() + 1), 0);
  mask.back() = 1;
  for (const Edge& e : instance.arrival(state.t).edges) {
    if (state.available[static_cast<std::size_t>(e.u)]) mask[static_cast<std::size_t>(e.u)] = 1;
  }
  return mask;
}

double marginal_gain(const OsbmPayload& payload, int user, const std::vector<char>& covered_by_user,
                     int u) {
  const auto& w = payload.user_weights[static_cast<std::size_t>(user)];
  double gain = 0.0;
  for (int z : payload.genres_per_u[static_cast<std::size_t>(u)]) {
    if (!covered_by_user[static_cast<std::size_t>(z)]) gain += w[static_cast<std::size_t>(z)];
  }
  return gain;
}

namespace {

double adwords_charge(double bid, double remaining) {
  return bid >= remaining * (1.0 - kBudgetSlack) ? remaining : bid;
}

}  // namespace

double edge_value(const BipartiteInstance& instance, const EpisodeState& state, int u) {
  const Arrival& a = instance.arrival(state.t);
  const Edge* e = a.find(u);
  if (e == nullptr) throw ContractViolation("edge_value: no edge to fixed node " + std::to_string(u));
  switch (instance.kind()) {
    case ProblemKind::kEobm:
      return e->w;
    case ProblemKind::kOsbm:
      return marginal_gain(instance.osbm(), *a.user, state.covered[static_cast<std::size_t>(*a.user)], u);
    case ProblemKind::kAdwords:
      return adwords_charge(e->w, state.remaining[static_cast<std::size_t>(u)]);
  }
  return 0.0;
}

double step(const BipartiteInstance& instance, EpisodeState& state, int action) {
  if (state.terminal(instance)) throw ContractViolation("step on a terminal state");
  const int n = instance.u_count();
  if (action < 0 || action > n) {
    throw ContractViolation("action " + std::to_string(action) + " out of range at t=" +
                            std::to_string(state.t));
  }
  const Arrival& a = instance.arrival(state.t);

  double observed_max = 0.0;
  for (const Edge& e : a.edges) observed_max = std::max(observed_max, e.w);
  if (instance.kind() == ProblemKind::kOsbm) {
    const auto& covered = state.covered[static_cast<std::size_t>(*a.user)];
    for (const Edge& e : a.edges) {
      observed_max = std::max(observed_max, marginal_gain(instance.osbm(), *a.user, covered, e.u));
    }
  }

  if (action == n) {
    state.features.record(a, std::nullopt, false, observed_max);
    state.decisions.push_back(std::nullopt);
    ++state.t;
    return 0.0;
  }

  const auto u = static_cast<std::size_t>(action);
  const Edge* e = a.find(action);
  if (e == nullptr || !state.available[u]) {
    throw ContractViolation("illegal action " + std::to_string(action) + " at t=" +
                            std::to_string(state.t) +
                            (e == nullptr ? " (no such edge)" : " (node unavailable)"));
  }

  double reward = 0.0;
  switch (instance.kind()) {
    case ProblemKind::kEobm:
      reward = e->w;
      state.available[u] = 0;
      break;
    case ProblemKind::kOsbm: {
      const auto& p = instance.osbm();
      auto& covered = state.covered[static_cast<std::size_t>(*a.user)];
      reward = marginal_gain(p, *a.user, covered, action);
      for (int z : p.genres_per_u[u]) covered[static_cast<std::size_t>(z)] = 1;
      state.available[u] = 0;
      break;
    }
    case ProblemKind::kAdwords: {
      double& r = state.remaining[u];
      reward = adwords_charge(e->w, r);
      if (reward == r) {
        r = 0.0;
        state.available[u] = 0;
      } else {
        r -= reward;
      }
      break;
    }
  }
  const bool first = !state.ever_matched[u];
  state.ever_matched[u] = 1;
  state.features.record(a, reward, first, observed_max);
  state.matched_pairs.emplace_back(state.t, action);
  state.decisions.push_back(action);
  state.cumulative_reward += reward;
  ++state.t;
  return reward;
}

Solution to_solution(const EpisodeState& state) {
  return Solution{state.decisions, state.cumulative_reward};
}

double recompute_objective(const BipartiteInstance& instance,
                           const std::vector<std::optional<int>>& decisions) {
  switch (instance.kind()) {
    case ProblemKind::kEobm: {
      double total = 0.0;
      for (std::size_t t = 0; t < decisions.size(); ++t) {
        if (decisions[t]) total += instance.arrival(static_cast<int>(t)).find(*decisions[t])->w;
      }
      return total;
    }
    case ProblemKind::kOsbm: {
      std::map<int, std::vector<int>> movies_by_user;
      for (std::size_t t = 0; t < decisions.size(); ++t) {
        if (decisions[t]) movies_by_user[*instance.arrival(static_cast<int>(t)).user].push_back(*decisions[t]);
      }
      double total = 0.0;
      for (const auto& [user, movies] : movies_by_user) total += coverage_value(instance.osbm(), user, movies);
      return total;
    }
    case ProblemKind::kAdwords: {
      std::vector<double> bids(static_cast<std::size_t>(instance.u_count()), 0.0);
      for (std::size_t t = 0; t < decisions.size(); ++t) {
        if (decisions[t]) bids[static_cast<std::size_t>(*decisions[t])] += instance.arrival(static_cast<int>(t)).find(*decisions[t])->w;
      }
      double total = 0.0;
      for (std::size_t u = 0; u < bids.size(); ++u) total += std::min(bids[u], instance.adwords().budgets[u]);
      return total;
    }
  }
  return 0.0;
}

}  // namespace matchlab
