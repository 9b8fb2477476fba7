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

#include "matchlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "matchlab/assignment.hpp"
#include "matchlab/baselines.hpp"
#include "matchlab/env.hpp"
#include "matchlab/error.hpp"
#include "matchlab/parallel.hpp"

namespace matchlab {

const char* to_string(OracleStatus status) {
  return status == OracleStatus::kOptimal ? "ok" : "refused";
}

namespace {

OracleResult finish(const BipartiteInstance& instance, std::vector<std::optional<int>> decisions) {
  OracleResult r;
  r.assignment = std::move(decisions);
  r.opt = recompute_objective(instance, r.assignment);
  r.upper_bound = r.opt;
  return r;
}

}  // namespace

OracleResult solve_eobm(const BipartiteInstance& instance) {
  if (instance.kind() != ProblemKind::kEobm) throw ContractViolation("solve_eobm: not an E-OBM instance");
  const int T = instance.horizon();
  const int n = instance.u_count();
  std::vector<std::vector<double>> value(static_cast<std::size_t>(T),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int t = 0; t < T; ++t) {
    for (const Edge& e : instance.arrival(t).edges) value[static_cast<std::size_t>(t)][static_cast<std::size_t>(e.u)] = e.w;
  }
  const auto row_to_col = max_weight_assignment(value);
  std::vector<std::optional<int>> decisions(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const int u = row_to_col[static_cast<std::size_t>(t)];
    if (u >= 0 && value[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)] > 0.0) decisions[static_cast<std::size_t>(t)] = u;
  }
  OracleResult r = finish(instance, std::move(decisions));
  r.root_bound = r.opt;
  return r;
}

namespace {

// Per-movie best single-movie contribution to any user that arrives at or
// after t with an edge to it; empty coverage.
std::vector<double> root_movie_gains(const BipartiteInstance& instance) {
  const auto& p = instance.osbm();
  std::vector<double> best(static_cast<std::size_t>(instance.u_count()), 0.0);
  for (const Arrival& a : instance.arrivals()) {
    for (const Edge& e : a.edges) {
      best[static_cast<std::size_t>(e.u)] =
          std::max(best[static_cast<std::size_t>(e.u)], coverage_value(p, *a.user, {e.u}));
    }
  }
  return best;
}

double top_sum(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(k, v.size()); ++i) s += v[i];
  return s;
}

class OsbmSearch {
 public:
  OsbmSearch(const BipartiteInstance& instance, const OsbmLimits& limits)
      : inst_(instance), p_(instance.osbm()), limits_(limits) {
    n_ = instance.u_count();
    T_ = instance.horizon();
    user_count_ = static_cast<int>(p_.user_weights.size());
    movie_mask_.resize(static_cast<std::size_t>(n_), 0);
    for (int u = 0; u < n_; ++u) {
      for (int z : p_.genres_per_u[static_cast<std::size_t>(u)]) movie_mask_[static_cast<std::size_t>(u)] |= (1u << z);
    }
    // future_[t][u]: users arriving at or after t with an edge to u.
    future_.assign(static_cast<std::size_t>(T_ + 1), std::vector<std::vector<int>>(static_cast<std::size_t>(n_)));
    std::vector<std::vector<char>> seen(static_cast<std::size_t>(n_), std::vector<char>(static_cast<std::size_t>(user_count_), 0));
    for (int t = T_ - 1; t >= 0; --t) {
      future_[static_cast<std::size_t>(t)] = future_[static_cast<std::size_t>(t + 1)];
      const Arrival& a = inst_.arrival(t);
      for (const Edge& e : a.edges) {
        auto& s = seen[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(*a.user)];
        if (!s) {
          s = 1;
          future_[static_cast<std::size_t>(t)][static_cast<std::size_t>(e.u)].push_back(*a.user);
        }
      }
    }
    covered_.assign(static_cast<std::size_t>(user_count_), 0u);
    available_.assign(static_cast<std::size_t>(n_), 1);
    current_.assign(static_cast<std::size_t>(T_), std::nullopt);
  }

  double gain(int u, int user) const {
    std::uint32_t fresh = movie_mask_[static_cast<std::size_t>(u)] & ~covered_[static_cast<std::size_t>(user)];
    const auto& w = p_.user_weights[static_cast<std::size_t>(user)];
    double g = 0.0;
    while (fresh) {
      const int z = __builtin_ctz(fresh);
      g += w[static_cast<std::size_t>(z)];
      fresh &= fresh - 1;
    }
    return g;
  }

  double bound(int t) const {
    std::vector<double> gains;
    for (int u = 0; u < n_; ++u) {
      if (!available_[static_cast<std::size_t>(u)]) continue;
      double m = 0.0;
      for (int user : future_[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)]) m = std::max(m, gain(u, user));
      if (m > 0.0) gains.push_back(m);
    }
    return top_sum(std::move(gains), static_cast<std::size_t>(T_ - t));
  }

  void seed_incumbent(const std::vector<std::optional<int>>& decisions, double value) {
    best_ = decisions;
    best_value_ = value;
  }

  void run() {
    root_bound_ = bound(0);
    dfs(0, 0.0);
  }

  double root_bound() const { return root_bound_; }
  std::int64_t nodes() const { return nodes_; }
  const std::vector<std::optional<int>>& best() const { return best_; }

 private:
  void dfs(int t, double value) {
    if (++nodes_ > limits_.node_budget) {
      throw OracleRefused("osbm: node budget of " + std::to_string(limits_.node_budget) + " exhausted");
    }
    if (value > best_value_ + kImprove) {
      best_value_ = value;
      best_ = current_;
      for (int s = t; s < T_; ++s) best_[static_cast<std::size_t>(s)] = std::nullopt;
    }
    if (t == T_) return;
    if (value + bound(t) <= best_value_ + kImprove) return;
    const Arrival& a = inst_.arrival(t);
    const int user = *a.user;
    std::vector<std::pair<double, int>> options;
    for (const Edge& e : a.edges) {
      if (!available_[static_cast<std::size_t>(e.u)]) continue;
      const double g = gain(e.u, user);
      // Zero-gain matches are dominated by skipping.
      if (g > 0.0) options.emplace_back(g, e.u);
    }
    std::sort(options.begin(), options.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (const auto& [g, u] : options) {
      const std::uint32_t saved = covered_[static_cast<std::size_t>(user)];
      covered_[static_cast<std::size_t>(user)] |= movie_mask_[static_cast<std::size_t>(u)];
      available_[static_cast<std::size_t>(u)] = 0;
      current_[static_cast<std::size_t>(t)] = u;
      dfs(t + 1, value + g);
      current_[static_cast<std::size_t>(t)] = std::nullopt;
      available_[static_cast<std::size_t>(u)] = 1;
      covered_[static_cast<std::size_t>(user)] = saved;
    }
    dfs(t + 1, value);
  }

  static constexpr double kImprove = 1e-12;

  const BipartiteInstance& inst_;
  const OsbmPayload& p_;
  OsbmLimits limits_;
  int n_ = 0;
  int T_ = 0;
  int user_count_ = 0;
  std::vector<std::uint32_t> movie_mask_;
  std::vector<std::vector<std::vector<int>>> future_;
  std::vector<std::uint32_t> covered_;
  std::vector<char> available_;
  std::vector<std::optional<int>> current_;
  std::vector<std::optional<int>> best_;
  double best_value_ = -1.0;
  double root_bound_ = 0.0;
  std::int64_t nodes_ = 0;
};

std::vector<std::optional<int>> greedy_decisions(const BipartiteInstance& instance) {
  EpisodeState s = reset(instance);
  while (!s.terminal(instance)) step(instance, s, greedy_act(instance, s));
  return s.decisions;
}

}  // namespace

double osbm_upper_bound(const BipartiteInstance& instance) {
  const auto& p = instance.osbm();
  const double by_movie = top_sum(root_movie_gains(instance), static_cast<std::size_t>(instance.horizon()));
  // Each arriving user can at most collect all of its genre weights.
  std::vector<char> present(p.user_weights.size(), 0);
  for (const Arrival& a : instance.arrivals()) {
    if (!a.edges.empty()) present[static_cast<std::size_t>(*a.user)] = 1;
  }
  double by_user = 0.0;
  for (std::size_t l = 0; l < present.size(); ++l) {
    if (present[l]) by_user += std::accumulate(p.user_weights[l].begin(), p.user_weights[l].end(), 0.0);
  }
  return std::min(by_movie, by_user);
}

OracleResult solve_osbm(const BipartiteInstance& instance, const OsbmLimits& limits) {
  if (instance.kind() != ProblemKind::kOsbm) throw ContractViolation("solve_osbm: not an OSBM instance");
  const auto& p = instance.osbm();
  if (instance.u_count() > limits.max_fixed || instance.horizon() > limits.max_arrivals ||
      p.genre_count > limits.max_genres || p.genre_count > 32) {
    throw OracleRefused("osbm: instance " + std::to_string(instance.u_count()) + "x" +
                        std::to_string(instance.horizon()) + " with " + std::to_string(p.genre_count) +
                        " genres exceeds solver limits");
  }
  OsbmSearch search(instance, limits);
  const auto incumbent = greedy_decisions(instance);
  search.seed_incumbent(incumbent, recompute_objective(instance, incumbent));
  search.run();
  OracleResult r = finish(instance, search.best());
  r.nodes_explored = search.nodes();
  r.root_bound = search.root_bound();
  return r;
}

namespace {

double uniform_bid(const BipartiteInstance& instance) {
  std::optional<double> bid;
  for (const Arrival& a : instance.arrivals()) {
    for (const Edge& e : a.edges) {
      if (!bid) bid = e.w;
      if (std::abs(e.w - *bid) > 1e-12 * std::max(1.0, *bid)) {
        throw OracleRefused("adwords: bids are not uniform; the general offline optimum is not supported");
      }
    }
  }
  if (!bid) throw OracleRefused("adwords: instance has no edges");
  return *bid;
}

}  // namespace

double adwords_upper_bound(const BipartiteInstance& instance) {
  const auto& budgets = instance.adwords().budgets;
  const double total = std::accumulate(budgets.begin(), budgets.end(), 0.0);
  double by_arrival = 0.0;
  for (const Arrival& a : instance.arrivals()) {
    double m = 0.0;
    for (const Edge& e : a.edges) m = std::max(m, std::min(e.w, budgets[static_cast<std::size_t>(e.u)]));
    by_arrival += m;
  }
  return std::min(total, by_arrival);
}

OracleResult solve_adwords_uniform(const BipartiteInstance& instance) {
  if (instance.kind() != ProblemKind::kAdwords) throw ContractViolation("solve_adwords_uniform: not an Adwords instance");
  const double bid = uniform_bid(instance);
  const int n = instance.u_count();
  const int T = instance.horizon();
  std::vector<long long> capacity(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    const double ratio = instance.adwords().budgets[static_cast<std::size_t>(u)] / bid;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
      throw OracleRefused("adwords: budget of fixed node " + std::to_string(u) + " is not a multiple of the bid");
    }
    capacity[static_cast<std::size_t>(u)] = static_cast<long long>(rounded);
  }
  // source = 0, arrivals 1..T, fixed nodes T+1..T+n, sink T+n+1.
  const int source = 0;
  const int sink = T + n + 1;
  MaxFlow flow(T + n + 2);
  std::vector<std::vector<std::pair<int, int>>> arcs(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    flow.add_edge(source, 1 + t, 1);
    for (const Edge& e : instance.arrival(t).edges) {
      arcs[static_cast<std::size_t>(t)].emplace_back(flow.add_edge(1 + t, 1 + T + e.u, 1), e.u);
    }
  }
  for (int u = 0; u < n; ++u) flow.add_edge(1 + T + u, sink, capacity[static_cast<std::size_t>(u)]);
  flow.run(source, sink);
  std::vector<std::optional<int>> decisions(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    for (const auto& [id, u] : arcs[static_cast<std::size_t>(t)]) {
      if (flow.flow_on(id) > 0) decisions[static_cast<std::size_t>(t)] = u;
    }
  }
  OracleResult r = finish(instance, std::move(decisions));
  r.root_bound = r.opt;
  return r;
}

OracleResult solve_instance(const BipartiteInstance& instance, const OsbmLimits& limits) {
  try {
    switch (instance.kind()) {
      case ProblemKind::kEobm:
        return solve_eobm(instance);
      case ProblemKind::kOsbm:
        return solve_osbm(instance, limits);
      case ProblemKind::kAdwords:
        return solve_adwords_uniform(instance);
    }
  } catch (const OracleRefused& e) {
    OracleResult r;
    r.status = OracleStatus::kRefused;
    r.refusal = e.what();
    r.upper_bound = instance.kind() == ProblemKind::kOsbm ? osbm_upper_bound(instance)
                                                          : adwords_upper_bound(instance);
    r.root_bound = r.upper_bound;
    return r;
  }
  return {};
}

std::vector<OracleResult> solve_dataset(const Dataset& dataset, const OsbmLimits& limits) {
  std::vector<OracleResult> out(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    out[static_cast<std::size_t>(i)] = solve_instance(dataset[static_cast<std::size_t>(i)], limits);
  });
  return out;
}

std::vector<OracleResult> solve_dataset_serial(const Dataset& dataset, const OsbmLimits& limits) {
  std::vector<OracleResult> out;
  out.reserve(dataset.size());
  for (const auto& inst : dataset) out.push_back(solve_instance(inst, limits));
  return out;
}

std::vector<int> hindsight_targets(const BipartiteInstance& instance, const OracleResult& result) {
  if (!result.optimal()) throw DataError("hindsight_targets: oracle refused this instance");
  if (static_cast<int>(result.assignment.size()) != instance.horizon()) {
    throw DataError("hindsight_targets: assignment length does not match the horizon");
  }
  std::vector<int> targets;
  targets.reserve(result.assignment.size());
  for (const auto& d : result.assignment) targets.push_back(d ? *d : skip_action(instance));
  return targets;
}

}  // namespace matchlab
