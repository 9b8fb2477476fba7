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

#ifndef MATCHLAB_GENERATORS_HPP_
#define MATCHLAB_GENERATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "matchlab/base_graph.hpp"
#include "matchlab/instance.hpp"
#include "matchlab/rng.hpp"

namespace matchlab {

enum class GenKind { kEr, kBa, kBaseGraph, kAdwordsTemplate };

// Whether base-graph datasets reuse one fixed-node sample for every instance
// ("fixed") or draw a new one per instance ("var").
enum class FixedNodeMode { kFixed, kVar };

const char* to_string(GenKind kind);
GenKind parse_gen_kind(const std::string& name);

struct GenSpec {
  GenKind kind = GenKind::kEr;
  int u_count = 10;
  int v_count = 30;
  // ER: edge probability. BA: target average degree of an arrival.
  double p = 0.5;
  FixedNodeMode mode = FixedNodeMode::kFixed;
  double bid_lo = 0.1;
  double bid_hi = 0.4;
  std::uint64_t seed = 0;
  int count = 1;
};

// Throws ConfigError on out-of-range parameters.
void check_spec(const GenSpec& spec);

// Maximum redraws for an arrival that comes out with no edges.
inline constexpr int kMaxRedraws = 1'000'000;

BipartiteInstance gen_er(const GenSpec& spec, Rng& rng);

// Preferential-attachment probabilities (1 + deg(u)) / (|U| + sum deg).
std::vector<double> ba_attachment_distribution(const std::vector<int>& degrees);

BipartiteInstance gen_ba(const GenSpec& spec, Rng& rng);

// Draws `k` distinct values from [0, n) in sampling order.
std::vector<int> sample_without_replacement(int n, int k, Rng& rng);

// One base-graph instance over the given fixed-node sample (base left ids).
BipartiteInstance gen_from_base_instance(const GenSpec& spec, const BaseGraph& base,
                                         const std::vector<int>& fixed_nodes, Rng& rng);

// The full base-graph sampling procedure for spec.count instances.
Dataset gen_from_base(const GenSpec& spec, const BaseGraph& base);

// Hard-instance scaffolding: template right nodes arrive in index order, all
// bids equal one draw from [bid_lo, bid_hi), budgets bid * |V| / |U|, and the
// fixed nodes are shuffled.
BipartiteInstance gen_adwords(const GenSpec& spec, const BaseGraph& tmpl, Rng& rng);

// Whole dataset; instance i draws from stream (seed, i). The OpenMP version
// is byte-identical to the serial reference for any thread count.
Dataset generate_dataset(const GenSpec& spec, const BaseGraph* base = nullptr);
Dataset generate_dataset_serial(const GenSpec& spec, const BaseGraph* base = nullptr);

}  // namespace matchlab

#endif  // MATCHLAB_GENERATORS_HPP_
