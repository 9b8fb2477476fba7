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

#ifndef MATCHLAB_EVAL_HPP_
#define MATCHLAB_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchlab/generators.hpp"
#include "matchlab/oracle.hpp"
#include "matchlab/policy.hpp"

namespace matchlab {

struct InstanceOutcome {
  std::size_t index = 0;
  double objective = 0.0;
  // OPT, or the oracle's upper bound when `against_bound` is set.
  double opt = 0.0;
  double ratio = 0.0;
  bool against_bound = false;
  // Ratio outside (0, 1 + 1e-9] against a true optimum.
  bool out_of_range = false;
  std::vector<std::optional<int>> decisions;
};

struct EvalSummary {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::size_t against_bound = 0;
  std::size_t out_of_range = 0;
};

EvalSummary summarize(const std::vector<double>& ratios);

struct EvalOptions {
  std::uint64_t seed = 0;
  DecodeMode mode = DecodeMode::kGreedy;
  std::string dataset_hash;
};

struct EvalReport {
  std::string policy;
  std::string dataset_hash;
  std::uint64_t seed = 0;
  DecodeMode mode = DecodeMode::kGreedy;
  std::vector<InstanceOutcome> rows;
  EvalSummary summary;

  std::vector<double> ratios() const;
};

// One rollout per instance; instance i uses the episode stream (seed, i).
EvalReport evaluate(const Policy& policy, const Dataset& dataset,
                    const std::vector<OracleResult>& oracle, const EvalOptions& options);
EvalReport evaluate_serial(const Policy& policy, const Dataset& dataset,
                           const std::vector<OracleResult>& oracle, const EvalOptions& options);

// Entry t: fraction of instances whose decision at t matches the reference's
// decision at t, each replayed on its own trajectory. Skip == Skip agrees.
std::vector<double> agreement_curve(const Policy& policy, const Policy& reference,
                                    const Dataset& dataset, const EvalOptions& options);

std::unique_ptr<Policy> oracle_policy(const Dataset& dataset, const std::vector<OracleResult>& oracle);

struct TransferCell {
  int u_count = 0;
  int v_count = 0;
  // Missing when the model cannot act on this size.
  std::optional<double> mean_ratio;
};

// Evaluates one model on freshly generated test sets of each size. `family`
// supplies generator kind and parameters; its sizes and seed are overridden
// per cell.
std::vector<TransferCell> transfer_eval(const PolicyModel& model,
                                        const std::vector<std::pair<int, int>>& sizes,
                                        const GenSpec& family, int test_count, std::uint64_t seed,
                                        const BaseGraph* base = nullptr,
                                        const OsbmLimits& limits = {});

// Fixed-node relabeling drawn from the (seed, index) permutation stream.
std::vector<int> instance_permutation(int u_count, std::uint64_t seed, std::size_t index);
Dataset permute_dataset(const Dataset& dataset, std::uint64_t seed);

struct PermutationReport {
  EvalReport original;
  EvalReport permuted;
};

// OPT is invariant under relabeling, so the original oracle serves both.
PermutationReport permutation_stress(const Policy& policy, const Dataset& dataset,
                                     const std::vector<OracleResult>& oracle,
                                     const EvalOptions& options);

void write_report_csv(const std::filesystem::path& path, const EvalReport& report);
void write_summary_json(const std::filesystem::path& path, const EvalReport& report);
void write_agreement_csv(const std::filesystem::path& path, const std::vector<double>& curve);
using TransferRows = std::vector<std::pair<std::string, std::vector<TransferCell>>>;

// Rows grouped by model name; missing cells are written as "-".
void write_transfer_csv(const std::filesystem::path& path, const TransferRows& rows);

}  // namespace matchlab

#endif  // MATCHLAB_EVAL_HPP_
