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

#ifndef MATCHLAB_TESTS_SUPPORT_HPP_
#define MATCHLAB_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "matchlab/base_graph.hpp"
#include "matchlab/env.hpp"
#include "matchlab/instance.hpp"
#include "matchlab/mlp.hpp"
#include "matchlab/rng.hpp"

namespace matchlab::testing {

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Each arrival gets every fixed node with probability `density`, and at
// least one edge.
inline std::vector<Arrival> random_arrivals(Rng& rng, int n, int T, double density,
                                            const std::function<double(Rng&)>& weight) {
  std::vector<Arrival> arrivals(static_cast<std::size_t>(T));
  for (auto& a : arrivals) {
    while (a.edges.empty()) {
      for (int u = 0; u < n; ++u) {
        if (uniform01(rng) < density) a.edges.push_back({u, weight(rng)});
      }
    }
  }
  return arrivals;
}

inline BipartiteInstance random_eobm(Rng& rng, int n, int T, double density = 0.6) {
  return BipartiteInstance(n, random_arrivals(rng, n, T, density, [](Rng& r) { return uniform_open_closed(r); }),
                           EobmPayload{});
}

inline BipartiteInstance random_osbm(Rng& rng, int n, int T, int g, int users, double density = 0.6) {
  OsbmPayload p;
  p.genre_count = g;
  for (int u = 0; u < n; ++u) {
    std::vector<int> genres;
    while (genres.empty()) {
      for (int z = 0; z < g; ++z) {
        if (uniform01(rng) < 0.5) genres.push_back(z);
      }
    }
    p.genres_per_u.push_back(genres);
  }
  for (int l = 0; l < users; ++l) {
    std::vector<double> w(static_cast<std::size_t>(g));
    for (double& x : w) x = std::floor(uniform01(rng) * 50.0) / 10.0;
    p.user_weights.push_back(w);
  }
  auto arrivals = random_arrivals(rng, n, T, density, [](Rng&) { return 1.0; });
  for (auto& a : arrivals) a.user = uniform_int(rng, 0, users - 1);
  return BipartiteInstance(n, std::move(arrivals), std::move(p));
}

inline BipartiteInstance random_adwords(Rng& rng, int n, int T, bool uniform_bids, int max_capacity = 3,
                                        double density = 0.5) {
  const double bid = 0.1 + 0.3 * uniform01(rng);
  auto arrivals = random_arrivals(rng, n, T, density, [&](Rng& r) { return uniform_bids ? bid : 0.1 + 0.3 * uniform01(r); });
  AdwordsPayload p;
  for (int u = 0; u < n; ++u) {
    const int cap = uniform_int(rng, 1, max_capacity);
    p.budgets.push_back(uniform_bids ? bid * cap : 0.05 + uniform01(rng));
  }
  return BipartiteInstance(n, std::move(arrivals), std::move(p));
}

// Maximum over all permutations of the zero-padded square matrix.
inline double brute_force_eobm(const BipartiteInstance& inst) {
  const int n = inst.u_count();
  const int T = inst.horizon();
  const int k = std::max(n, T);
  std::vector<std::vector<double>> value(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int t = 0; t < T; ++t) {
    for (const Edge& e : inst.arrival(t).edges) value[static_cast<std::size_t>(t)][static_cast<std::size_t>(e.u)] = e.w;
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double s = 0.0;
    for (int t = 0; t < k; ++t) s += value[static_cast<std::size_t>(t)][static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Coverage objective of a decision sequence, computed from scratch.
inline double osbm_objective(const BipartiteInstance& inst, const std::vector<std::optional<int>>& decisions) {
  const auto& p = inst.osbm();
  std::vector<std::vector<int>> movies(p.user_weights.size());
  for (int t = 0; t < inst.horizon(); ++t) {
    if (decisions[static_cast<std::size_t>(t)]) movies[static_cast<std::size_t>(*inst.arrival(t).user)].push_back(*decisions[static_cast<std::size_t>(t)]);
  }
  double total = 0.0;
  for (std::size_t l = 0; l < movies.size(); ++l) total += coverage_value(p, static_cast<int>(l), movies[l]);
  return total;
}

// Enumerates every feasible decision sequence (each arrival skips or takes
// an unused neighbour; Adwords nodes stay usable while budget remains).
inline void enumerate_assignments(const BipartiteInstance& inst,
                                  const std::function<void(const std::vector<std::optional<int>>&)>& visit) {
  const int T = inst.horizon();
  std::vector<std::optional<int>> cur(static_cast<std::size_t>(T));
  std::vector<int> uses(static_cast<std::size_t>(inst.u_count()), 0);
  const bool adwords = inst.kind() == ProblemKind::kAdwords;
  std::function<void(int)> rec = [&](int t) {
    if (t == T) {
      visit(cur);
      return;
    }
    cur[static_cast<std::size_t>(t)] = std::nullopt;
    rec(t + 1);
    for (const Edge& e : inst.arrival(t).edges) {
      int& k = uses[static_cast<std::size_t>(e.u)];
      const bool ok = adwords ? k * e.w < inst.adwords().budgets[static_cast<std::size_t>(e.u)] * (1.0 - 1e-12) : k == 0;
      if (!ok) continue;
      ++k;
      cur[static_cast<std::size_t>(t)] = e.u;
      rec(t + 1);
      cur[static_cast<std::size_t>(t)] = std::nullopt;
      --k;
    }
  };
  rec(0);
}

inline double brute_force_osbm(const BipartiteInstance& inst) {
  double best = 0.0;
  enumerate_assignments(inst, [&](const auto& d) { best = std::max(best, osbm_objective(inst, d)); });
  return best;
}

// Uniform bids: each use of u spends min(bid, remaining).
inline double brute_force_adwords(const BipartiteInstance& inst) {
  double best = 0.0;
  const auto& budgets = inst.adwords().budgets;
  enumerate_assignments(inst, [&](const auto& d) {
    std::vector<double> spent(budgets.size(), 0.0);
    for (int t = 0; t < inst.horizon(); ++t) {
      if (!d[static_cast<std::size_t>(t)]) continue;
      const int u = *d[static_cast<std::size_t>(t)];
      const double w = inst.arrival(t).find(u)->w;
      spent[static_cast<std::size_t>(u)] = std::min(budgets[static_cast<std::size_t>(u)], spent[static_cast<std::size_t>(u)] + w);
    }
    best = std::max(best, std::accumulate(spent.begin(), spent.end(), 0.0));
  });
  return best;
}

inline BaseGraph random_base_graph(Rng& rng, int left, int right, double density, bool osbm = false,
                                   int genres = 5) {
  std::vector<BaseEdge> edges;
  for (int r = 0; r < right; ++r) {
    bool any = false;
    while (!any) {
      for (int l = 0; l < left; ++l) {
        if (uniform01(rng) < density) {
          edges.push_back({l, r, uniform_open_closed(rng)});
          any = true;
        }
      }
    }
  }
  BaseGraph g(left, right, std::move(edges));
  if (osbm) {
    std::vector<std::vector<int>> lg(static_cast<std::size_t>(left));
    for (auto& s : lg) {
      while (s.empty()) {
        for (int z = 0; z < genres; ++z) {
          if (uniform01(rng) < 0.4) s.push_back(z);
        }
      }
    }
    std::vector<std::vector<double>> rr(static_cast<std::size_t>(right), std::vector<double>(static_cast<std::size_t>(genres)));
    for (auto& row : rr) {
      for (double& x : row) x = 1.0 + std::floor(uniform01(rng) * 40.0) / 10.0;
    }
    g.set_osbm_annotations(genres, std::move(lg), std::move(rr));
  }
  return g;
}

// Uniformly random legal action.
inline int random_legal(const Mask& mask, Rng& rng) {
  std::vector<int> legal;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) legal.push_back(static_cast<int>(i));
  }
  return legal[static_cast<std::size_t>(rng() % legal.size())];
}

// Smallest |pre-activation| over every hidden unit and row; finite
// differences are only trustworthy away from ReLU kinks.
inline double min_abs_preactivation(const MlpParams& params, const Eigen::MatrixXd& x) {
  double m = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l + 1 < params.layers.size(); ++l) {
    Eigen::MatrixXd z = (h * params.layers[l].weight.transpose()).rowwise() + params.layers[l].bias.transpose();
    m = std::min(m, z.cwiseAbs().minCoeff());
    h = z.cwiseMax(0.0);
  }
  return m;
}

// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor).
inline double max_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

// Central differences of `loss` over every flattened coordinate of `params`.
inline std::vector<double> numeric_gradient(MlpParams params, const std::function<double(const MlpParams&)>& loss,
                                            double h = 1e-5) {
  auto flat = params.flatten();
  std::vector<double> g(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double keep = flat[i];
    flat[i] = keep + h;
    params.unflatten(flat);
    const double up = loss(params);
    flat[i] = keep - h;
    params.unflatten(flat);
    const double down = loss(params);
    flat[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace matchlab::testing

#endif  // MATCHLAB_TESTS_SUPPORT_HPP_
