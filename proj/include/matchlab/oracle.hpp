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

#ifndef MATCHLAB_ORACLE_HPP_
#define MATCHLAB_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/instance.hpp"

namespace matchlab {

enum class OracleStatus { kOptimal, kRefused };

const char* to_string(OracleStatus status);

struct OracleResult {
  OracleStatus status = OracleStatus::kOptimal;
  // Optimum when status is kOptimal; 0 otherwise.
  double opt = 0.0;
  // Equals `opt` when optimal; an admissible bound when refused.
  double upper_bound = 0.0;
  std::vector<std::optional<int>> assignment;
  std::int64_t nodes_explored = 0;
  double root_bound = 0.0;
  std::string refusal;

  bool optimal() const { return status == OracleStatus::kOptimal; }
};

struct OsbmLimits {
  int max_fixed = 12;
  int max_arrivals = 40;
  int max_genres = 20;
  std::int64_t node_budget = 10'000'000;
};

OracleResult solve_eobm(const BipartiteInstance& instance);

// Throws OracleRefused when the instance exceeds `limits`.
OracleResult solve_osbm(const BipartiteInstance& instance, const OsbmLimits& limits = {});

// Admissible upper bound on the OSBM optimum, cheap at any size.
double osbm_upper_bound(const BipartiteInstance& instance);

// Throws OracleRefused for non-uniform bids or budgets that are not a
// multiple of the bid.
OracleResult solve_adwords_uniform(const BipartiteInstance& instance);

// Admissible upper bound on the Adwords optimum.
double adwords_upper_bound(const BipartiteInstance& instance);

// Dispatches on the payload; refusals are returned, not thrown.
OracleResult solve_instance(const BipartiteInstance& instance, const OsbmLimits& limits = {});

std::vector<OracleResult> solve_dataset(const Dataset& dataset, const OsbmLimits& limits = {});
std::vector<OracleResult> solve_dataset_serial(const Dataset& dataset,
                                               const OsbmLimits& limits = {});

// Per-arrival target slot; Skip is index |U|.
std::vector<int> hindsight_targets(const BipartiteInstance& instance, const OracleResult& result);

}  // namespace matchlab

#endif  // MATCHLAB_ORACLE_HPP_
