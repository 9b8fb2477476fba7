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

#include <gtest/gtest.h>

#include "matchlab/env.hpp"
#include "matchlab/eval.hpp"
#include "matchlab/features.hpp"
#include "matchlab/input_assembly.hpp"
#include "support.hpp"

namespace matchlab {
namespace {

Arrival arrival_of(std::vector<Edge> edges) { return Arrival{std::move(edges), std::nullopt}; }

TEST(Features, GraphFeatureExamples) {
  FeatureState s;
  s.reset(2, 10);
  s.record(arrival_of({{0, 0.2}}), std::nullopt, false, 0.2);
  s.record(arrival_of({{0, 0.4}}), std::nullopt, false, 0.4);
  s.record(arrival_of({{1, 0.4}}), std::nullopt, false, 0.4);
  const auto g = graph_features(s, arrival_of({{1, 0.1}}));
  EXPECT_NEAR(g.mean_weight[0], 0.3, 1e-15);
  EXPECT_NEAR(g.weight_variance[0], 0.01, 1e-15);
  // t = 4 counting the current arrival; node 0 appeared in 2 of them.
  EXPECT_DOUBLE_EQ(g.average_degree[0], 0.5);
  EXPECT_DOUBLE_EQ(g.average_degree[1], 0.5);
  EXPECT_EQ(g.mean_weight[2], 0.0);
  EXPECT_EQ(g.average_degree[2], 0.0);
}

TEST(Features, NodeFeatureExamples) {
  FeatureState s;
  s.reset(10, 30);
  const auto a = arrival_of({{0, 0.1}, {3, 0.2}, {7, 0.3}});
  EXPECT_DOUBLE_EQ(node_features(s, a).pct_incident, 0.3);
  EXPECT_DOUBLE_EQ(node_features(s, a).step_fraction, 1.0 / 30.0);
  for (int t = 0; t < 29; ++t) s.record(a, std::nullopt, false, 0.3);
  EXPECT_DOUBLE_EQ(node_features(s, a).step_fraction, 1.0);
}

TEST(Features, SolutionFeatureExamples) {
  FeatureState s;
  s.reset(10, 30);
  const auto h0 = solution_features(s);
  for (double x : h0) EXPECT_EQ(x, 0.0);
  s.record(arrival_of({{0, 0.5}}), 0.5, true, 0.5);
  s.record(arrival_of({{1, 0.7}}), 0.7, true, 0.7);
  s.record(arrival_of({{2, 0.1}}), std::nullopt, false, 0.7);
  s.record(arrival_of({{3, 0.1}}), std::nullopt, false, 0.7);
  const auto h = solution_features(s);
  EXPECT_DOUBLE_EQ(h[0], 0.7);
  EXPECT_DOUBLE_EQ(h[1], 0.5);
  EXPECT_DOUBLE_EQ(h[2], 0.6);
  EXPECT_NEAR(h[3], 0.01, 1e-15);
  EXPECT_DOUBLE_EQ(h[4], 0.2);
  EXPECT_DOUBLE_EQ(h[5], 0.5);
  EXPECT_NEAR(h[6], 0.12, 1e-15);
}

TEST(Features, SkipRatioQuarter) {
  FeatureState s;
  s.reset(3, 10);
  s.record(arrival_of({{0, 0.5}}), 0.5, true, 0.5);
  s.record(arrival_of({{1, 0.5}}), 0.5, true, 0.5);
  s.record(arrival_of({{2, 0.5}}), 0.5, true, 0.5);
  s.record(arrival_of({{2, 0.5}}), std::nullopt, false, 0.5);
  EXPECT_DOUBLE_EQ(solution_features(s)[5], 0.25);
}

TEST(Features, InputWidths) {
  EXPECT_EQ(input_width(InputKind::kFf, ProblemKind::kEobm, 10), 22);
  EXPECT_EQ(input_width(InputKind::kFfHist, ProblemKind::kEobm, 10), 63);
  EXPECT_EQ(input_width(InputKind::kInvFf, ProblemKind::kEobm, 10), 3);
  EXPECT_EQ(input_width(InputKind::kInvFfHist, ProblemKind::kEobm, 10), 16);
  EXPECT_EQ(input_width(InputKind::kInvFfHist, ProblemKind::kAdwords, 10), 18);
  EXPECT_EQ(input_width(InputKind::kFf, ProblemKind::kAdwords, 10), 33);
  EXPECT_EQ(input_width(InputKind::kFfHist, ProblemKind::kAdwords, 10), 85);
  EXPECT_EQ(input_width(InputKind::kInvFf, ProblemKind::kAdwords, 10), 4);
}

TEST(Features, InvFfSkipSlot) {
  BipartiteInstance inst(3, {arrival_of({{0, 0.3}, {2, 0.9}})}, EobmPayload{});
  const auto x = assemble_input(InputKind::kInvFf, inst, reset(inst));
  ASSERT_EQ(x.rows(), 4);
  // Normalized by the largest weight seen (0.9): w_mean = 0.6 / 0.9.
  EXPECT_EQ(x(3, 0), 0.0);
  EXPECT_EQ(x(3, 1), 1.0);
  EXPECT_NEAR(x(3, 2), 0.6 / 0.9, 1e-15);
  EXPECT_NEAR(x(0, 0), 0.3 / 0.9, 1e-15);
  EXPECT_EQ(x(2, 0), 1.0);
}

TEST(Features, FfLayout) {
  BipartiteInstance inst(2, {arrival_of({{1, 0.5}})}, EobmPayload{});
  const auto x = assemble_input(InputKind::kFf, inst, reset(inst));
  ASSERT_EQ(x.cols(), 6);
  EXPECT_EQ(x(0, 0), 0.0);
  EXPECT_EQ(x(0, 1), 1.0);  // 0.5 normalized by itself
  EXPECT_EQ(x(0, 2), 0.0);
  EXPECT_EQ(x(0, 3), 1.0);
  EXPECT_EQ(x(0, 4), 1.0);
  EXPECT_EQ(x(0, 5), 1.0);
}

TEST(Features, EmptyArrivalIsFinite) {
  BipartiteInstance inst(3, {Arrival{}, arrival_of({{1, 0.5}})}, EobmPayload{});
  const auto s = reset(inst);
  for (auto kind : {InputKind::kFf, InputKind::kFfHist, InputKind::kInvFf, InputKind::kInvFfHist}) {
    EXPECT_TRUE(assemble_input(kind, inst, s).allFinite()) << to_string(kind);
  }
}

TEST(Features, IncrementalMatchesFromScratch) {
  Rng rng(6);
  int steps = 0;
  while (steps < 10000) {
    const auto inst = testing::random_eobm(rng, 5, 12);
    auto s = reset(inst);
    std::vector<int> deg(5, 0);
    std::vector<double> sum(5, 0.0);
    std::vector<double> sq(5, 0.0);
    std::vector<double> matched;
    while (!s.terminal(inst)) {
      const auto g = graph_features(s.features, inst.arrival(s.t));
      for (int u = 0; u < 5; ++u) {
        const auto i = static_cast<std::size_t>(u);
        const double mean = deg[i] ? sum[i] / deg[i] : 0.0;
        EXPECT_NEAR(g.mean_weight[i], mean, 1e-12);
        EXPECT_NEAR(g.weight_variance[i], deg[i] ? std::max(0.0, sq[i] / deg[i] - mean * mean) : 0.0, 1e-12);
      }
      const auto h = solution_features(s.features);
      double ms = 0.0;
      for (double v : matched) ms += v;
      EXPECT_NEAR(h[6], ms / 5.0, 1e-12);
      for (const auto& e : inst.arrival(s.t).edges) {
        deg[static_cast<std::size_t>(e.u)] += 1;
        sum[static_cast<std::size_t>(e.u)] += e.w;
        sq[static_cast<std::size_t>(e.u)] += e.w * e.w;
      }
      const int a = testing::random_legal(legal_mask(inst, s), rng);
      if (a < 5) matched.push_back(inst.arrival(s.t).find(a)->w);
      step(inst, s, a);
      ++steps;
    }
  }
}

TEST(Features, NormalizedFeaturesBounded) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = trial % 2 ? testing::random_eobm(rng, 6, 15) : testing::random_adwords(rng, 6, 15, false);
    auto s = reset(inst);
    while (!s.terminal(inst)) {
      for (auto kind : {InputKind::kFf, InputKind::kFfHist, InputKind::kInvFf, InputKind::kInvFfHist}) {
        const auto x = assemble_input(kind, inst, s);
        EXPECT_GE(x.minCoeff(), 0.0);
        EXPECT_LE(x.maxCoeff(), 1.0 + 1e-12);
      }
      step(inst, s, testing::random_legal(legal_mask(inst, s), rng));
    }
  }
}

TEST(Features, InvariantRowsPermuteWithNodes) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = trial % 3 == 0 ? testing::random_osbm(rng, 5, 9, 4, 3)
                                     : (trial % 3 == 1 ? testing::random_eobm(rng, 5, 9) : testing::random_adwords(rng, 5, 9, false));
    const auto perm = instance_permutation(5, 99, static_cast<std::size_t>(trial));
    const auto pinst = permute_fixed_nodes(inst, perm);
    auto s = reset(inst);
    auto ps = reset(pinst);
    while (!s.terminal(inst)) {
      const auto x = assemble_input(InputKind::kInvFfHist, inst, s);
      const auto px = assemble_input(InputKind::kInvFfHist, pinst, ps);
      for (int u = 0; u < 5; ++u) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
          ASSERT_EQ(x(u, c), px(perm[static_cast<std::size_t>(u)], c)) << "trial " << trial << " col " << c;
        }
      }
      for (Eigen::Index c = 0; c < x.cols(); ++c) ASSERT_EQ(x(5, c), px(5, c));
      const int a = testing::random_legal(legal_mask(inst, s), rng);
      step(inst, s, a);
      step(pinst, ps, a < 5 ? perm[static_cast<std::size_t>(a)] : 5);
    }
  }
}

}  // namespace
}  // namespace matchlab
