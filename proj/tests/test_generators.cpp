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

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "matchlab/dataset_io.hpp"
#include "matchlab/error.hpp"
#include "matchlab/generators.hpp"
#include "support.hpp"

namespace matchlab {
namespace {

// Mean and variance of Binomial(n, q) conditioned on at least one success.
std::pair<double, double> conditional_binomial(int n, double q) {
  const double p0 = std::pow(1.0 - q, n);
  const double mean = n * q / (1.0 - p0);
  const double second = (n * q * (1.0 - q) + n * q * n * q) / (1.0 - p0);
  return {mean, second - mean * mean};
}

GenSpec spec_of(GenKind kind, int u, int v, double p, int count, std::uint64_t seed) {
  GenSpec s;
  s.kind = kind;
  s.u_count = u;
  s.v_count = v;
  s.p = p;
  s.count = count;
  s.seed = seed;
  return s;
}

TEST(Generators, ErFullDensity) {
  const auto d = generate_dataset(spec_of(GenKind::kEr, 3, 20, 1.0, 5, 1));
  for (const auto& inst : d) {
    for (const auto& a : inst.arrivals()) EXPECT_EQ(a.edges.size(), 3u);
  }
}

TEST(Generators, ErMeanDegreeMatchesConditionedBinomial) {
  const auto d = generate_dataset(spec_of(GenKind::kEr, 10, 30, 0.5, 334, 2));
  double sum = 0.0;
  int count = 0;
  for (const auto& inst : d) {
    for (const auto& a : inst.arrivals()) {
      sum += static_cast<double>(a.edges.size());
      ++count;
    }
  }
  const auto [mean, var] = conditional_binomial(10, 0.5);
  const double sigma = std::sqrt(var / count);
  EXPECT_NEAR(sum / count, mean, 3.0 * sigma);
}

TEST(Generators, ErEdgeProbabilityWithinThreeSigma) {
  // Pooled edge indicator over >= 1e5 candidate pairs.
  const auto d = generate_dataset(spec_of(GenKind::kEr, 10, 50, 0.3, 220, 3));
  double edges = 0.0;
  double pairs = 0.0;
  for (const auto& inst : d) {
    for (const auto& a : inst.arrivals()) {
      edges += static_cast<double>(a.edges.size());
      pairs += 10.0;
    }
  }
  ASSERT_GE(pairs, 1e5);
  const auto [mean, var] = conditional_binomial(10, 0.3);
  const double arrivals = pairs / 10.0;
  EXPECT_NEAR(edges / pairs, mean / 10.0, 3.0 * std::sqrt(var / arrivals) / 10.0);
}

TEST(Generators, WeightsInUnitInterval) {
  for (const auto& inst : generate_dataset(spec_of(GenKind::kEr, 5, 10, 0.5, 20, 4))) {
    for (const auto& a : inst.arrivals()) {
      for (const auto& e : a.edges) {
        EXPECT_GT(e.w, 0.0);
        EXPECT_LE(e.w, 1.0);
      }
    }
  }
}

TEST(Generators, SameSeedSameBytes) {
  const auto s = spec_of(GenKind::kBa, 10, 30, 3, 20, 77);
  EXPECT_EQ(encode_dataset(generate_dataset(s)), encode_dataset(generate_dataset(s)));
}

TEST(Generators, BaAttachmentDistribution) {
  const auto mu0 = ba_attachment_distribution({0, 0, 0});
  for (double m : mu0) EXPECT_DOUBLE_EQ(m, 1.0 / 3.0);
  const auto mu = ba_attachment_distribution({0, 1, 3});
  EXPECT_DOUBLE_EQ(mu[0], 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(mu[1], 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(mu[2], 4.0 / 7.0);
}

TEST(Generators, BaMeanNeighbourCount) {
  const auto d = generate_dataset(spec_of(GenKind::kBa, 10, 50, 5, 200, 5));
  double sum = 0.0;
  int count = 0;
  for (const auto& inst : d) {
    for (const auto& a : inst.arrivals()) {
      sum += static_cast<double>(a.edges.size());
      ++count;
    }
  }
  const auto [mean, var] = conditional_binomial(10, 0.5);
  EXPECT_NEAR(sum / count, mean, 3.0 * std::sqrt(var / count));
}

TEST(Generators, BaHigherDegreeMeansHigherWeight) {
  const auto d = generate_dataset(spec_of(GenKind::kBa, 10, 60, 3, 50, 6));
  std::vector<double> deg;
  std::vector<double> mean_w;
  for (const auto& inst : d) {
    std::vector<double> c(10, 0.0);
    std::vector<double> s(10, 0.0);
    for (const auto& a : inst.arrivals()) {
      for (const auto& e : a.edges) {
        c[static_cast<std::size_t>(e.u)] += 1.0;
        s[static_cast<std::size_t>(e.u)] += e.w;
      }
    }
    for (int u = 0; u < 10; ++u) {
      if (c[static_cast<std::size_t>(u)] > 0) {
        deg.push_back(c[static_cast<std::size_t>(u)]);
        mean_w.push_back(s[static_cast<std::size_t>(u)] / c[static_cast<std::size_t>(u)]);
      }
    }
  }
  const double n = static_cast<double>(deg.size());
  const double md = std::accumulate(deg.begin(), deg.end(), 0.0) / n;
  const double mw = std::accumulate(mean_w.begin(), mean_w.end(), 0.0) / n;
  double cov = 0.0;
  for (std::size_t i = 0; i < deg.size(); ++i) cov += (deg[i] - md) * (mean_w[i] - mw);
  EXPECT_GT(cov, 0.0);
}

TEST(Generators, AllGeneratorsValidateAcrossSeeds) {
  Rng rng(8);
  const BaseGraph base = testing::random_base_graph(rng, 20, 40, 0.2, true);
  const BaseGraph tmpl = testing::random_base_graph(rng, 5, 15, 0.3);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GenSpec er = spec_of(GenKind::kEr, 4, 6, 0.3, 1, seed);
    const GenSpec ba = spec_of(GenKind::kBa, 4, 6, 2, 1, seed);
    GenSpec bg = spec_of(GenKind::kBaseGraph, 5, 6, 0, 1, seed);
    bg.mode = FixedNodeMode::kVar;
    GenSpec ad = spec_of(GenKind::kAdwordsTemplate, 5, 15, 0, 1, seed);
    for (const auto& inst : generate_dataset_serial(er)) ASSERT_TRUE(validate(inst).empty()) << seed;
    for (const auto& inst : generate_dataset_serial(ba)) ASSERT_TRUE(validate(inst).empty()) << seed;
    for (const auto& inst : generate_dataset_serial(bg, &base)) ASSERT_TRUE(validate(inst).empty()) << seed;
    for (const auto& inst : generate_dataset_serial(ad, &tmpl)) ASSERT_TRUE(validate(inst).empty()) << seed;
  }
}

TEST(Generators, CompleteBaseGraphCopiesRightNodes) {
  BaseGraph base(2, 2, {{0, 0, 0.3}, {1, 0, 0.6}, {0, 1, 0.2}, {1, 1, 0.9}});
  GenSpec s = spec_of(GenKind::kBaseGraph, 2, 3, 0, 4, 11);
  for (const auto& inst : generate_dataset(s, &base)) {
    for (const auto& a : inst.arrivals()) {
      ASSERT_EQ(a.edges.size(), 2u);
      const bool r0 = a.edges[0].w == 0.3 || a.edges[0].w == 0.6;
      const bool r1 = a.edges[0].w == 0.2 || a.edges[0].w == 0.9;
      EXPECT_TRUE(r0 || r1);
    }
  }
}

TEST(Generators, IsolatedRightNodeNeverAppears) {
  // Right node 0 has no edges; its single weight would be 0.77.
  BaseGraph base(3, 3, {{0, 1, 0.5}, {1, 1, 0.4}, {2, 2, 0.3}});
  GenSpec s = spec_of(GenKind::kBaseGraph, 3, 10, 0, 10, 12);
  for (const auto& inst : generate_dataset(s, &base)) {
    for (const auto& a : inst.arrivals()) EXPECT_FALSE(a.edges.empty());
  }
}

TEST(Generators, FixedVersusVarFixedNodeSelection) {
  Rng rng(13);
  const BaseGraph base = testing::random_base_graph(rng, 30, 60, 0.5);
  // Continuous base weights identify the base left node behind every edge.
  std::map<double, int> left_of;
  for (const auto& e : base.edges()) left_of[e.w] = e.left;
  auto selection = [&](const BipartiteInstance& inst) {
    std::vector<int> ids(static_cast<std::size_t>(inst.u_count()), -1);
    for (const auto& a : inst.arrivals()) {
      for (const auto& e : a.edges) ids[static_cast<std::size_t>(e.u)] = left_of.at(e.w);
    }
    return ids;
  };
  auto differing = [&](FixedNodeMode mode) {
    GenSpec s = spec_of(GenKind::kBaseGraph, 5, 40, 0, 2, 0);
    s.mode = mode;
    int differ = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      s.seed = seed;
      const auto d = generate_dataset(s, &base);
      differ += selection(d[0]) != selection(d[1]) ? 1 : 0;
    }
    return differ;
  };
  EXPECT_EQ(differing(FixedNodeMode::kFixed), 0);
  EXPECT_GE(differing(FixedNodeMode::kVar), 95);
}

TEST(Generators, AdwordsBudgetsAndBids) {
  Rng rng(14);
  const BaseGraph tmpl = testing::random_base_graph(rng, 10, 60, 0.3);
  GenSpec s = spec_of(GenKind::kAdwordsTemplate, 10, 60, 0, 100, 15);
  const auto d = generate_dataset(s, &tmpl);
  std::set<std::vector<int>> perms;
  for (const auto& inst : d) {
    const double bid = inst.arrival(0).edges[0].w;
    EXPECT_GE(bid, 0.1);
    EXPECT_LT(bid, 0.4);
    for (double b : inst.adwords().budgets) EXPECT_NEAR(b, bid * 6.0, 1e-12);
    std::vector<int> sig;
    for (const auto& a : inst.arrivals()) sig.push_back(a.edges.front().u);
    perms.insert(sig);
  }
  EXPECT_GT(perms.size(), 90u);
}

TEST(Generators, AdwordsBudgetFormula) {
  BaseGraph tmpl(10, 60, [] {
    std::vector<BaseEdge> e;
    for (int r = 0; r < 60; ++r) e.push_back({r % 10, r, 1.0});
    return e;
  }());
  GenSpec s = spec_of(GenKind::kAdwordsTemplate, 10, 60, 0, 1, 3);
  s.bid_lo = 0.2;
  s.bid_hi = 0.2 + 1e-15;
  const auto inst = generate_dataset(s, &tmpl).front();
  for (double b : inst.adwords().budgets) EXPECT_NEAR(b, 1.2, 1e-12);
}

TEST(Generators, InvalidSpecsRejected) {
  EXPECT_THROW(check_spec(spec_of(GenKind::kEr, 10, 30, 1.5, 1, 0)), ConfigError);
  EXPECT_THROW(check_spec(spec_of(GenKind::kBa, 10, 30, 10, 1, 0)), ConfigError);
  EXPECT_THROW(check_spec(spec_of(GenKind::kEr, 10, 30, 0.5, 0, 0)), ConfigError);
  BaseGraph base(3, 3, {{0, 0, 1.0}});
  EXPECT_THROW(generate_dataset(spec_of(GenKind::kBaseGraph, 5, 3, 0, 1, 0), &base), ConfigError);
}

}  // namespace
}  // namespace matchlab
