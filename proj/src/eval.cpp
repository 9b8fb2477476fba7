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

#include "matchlab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "matchlab/error.hpp"
#include "matchlab/parallel.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(sorted.size() - 1, lo + 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

InstanceOutcome evaluate_one(const Policy& policy, const BipartiteInstance& inst,
                             const OracleResult& oracle, const EvalOptions& options, std::size_t i) {
  Rng rng = make_rng(options.seed, {kStreamEpisode, i});
  const RolloutResult r = rollout(inst, policy, options.mode, rng, i);
  InstanceOutcome o;
  o.index = i;
  o.objective = r.solution.objective_value;
  o.against_bound = !oracle.optimal();
  o.opt = oracle.optimal() ? oracle.opt : oracle.upper_bound;
  o.ratio = o.opt > 0.0 ? o.objective / o.opt : 0.0;
  o.out_of_range = !o.against_bound && (o.ratio <= 0.0 || o.ratio > 1.0 + 1e-9);
  o.decisions = r.solution.decisions;
  return o;
}

EvalReport assemble(const Policy& policy, const EvalOptions& options, std::vector<InstanceOutcome> rows) {
  EvalReport rep;
  rep.policy = policy.name();
  rep.dataset_hash = options.dataset_hash;
  rep.seed = options.seed;
  rep.mode = options.mode;
  rep.rows = std::move(rows);
  rep.summary = summarize(rep.ratios());
  for (const auto& o : rep.rows) {
    rep.summary.against_bound += o.against_bound ? 1 : 0;
    rep.summary.out_of_range += o.out_of_range ? 1 : 0;
  }
  return rep;
}

void check_oracle(const Dataset& dataset, const std::vector<OracleResult>& oracle) {
  if (oracle.size() != dataset.size()) {
    throw DataError("oracle results (" + std::to_string(oracle.size()) + ") do not cover the dataset (" +
                    std::to_string(dataset.size()) + ")");
  }
}

}  // namespace

EvalSummary summarize(const std::vector<double>& ratios) {
  EvalSummary s;
  s.count = ratios.size();
  if (ratios.empty()) return s;
  double sum = 0.0;
  for (double r : ratios) sum += r;
  s.mean = sum / static_cast<double>(ratios.size());
  double sq = 0.0;
  for (double r : ratios) sq += (r - s.mean) * (r - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(ratios.size()));
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);
  return s;
}

std::vector<double> EvalReport::ratios() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& o : rows) out.push_back(o.ratio);
  return out;
}

EvalReport evaluate(const Policy& policy, const Dataset& dataset,
                    const std::vector<OracleResult>& oracle, const EvalOptions& options) {
  check_oracle(dataset, oracle);
  std::vector<InstanceOutcome> rows(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    rows[k] = evaluate_one(policy, dataset[k], oracle[k], options, k);
  });
  return assemble(policy, options, std::move(rows));
}

EvalReport evaluate_serial(const Policy& policy, const Dataset& dataset,
                           const std::vector<OracleResult>& oracle, const EvalOptions& options) {
  check_oracle(dataset, oracle);
  std::vector<InstanceOutcome> rows;
  rows.reserve(dataset.size());
  for (std::size_t k = 0; k < dataset.size(); ++k) rows.push_back(evaluate_one(policy, dataset[k], oracle[k], options, k));
  return assemble(policy, options, std::move(rows));
}

std::vector<double> agreement_curve(const Policy& policy, const Policy& reference,
                                    const Dataset& dataset, const EvalOptions& options) {
  if (dataset.empty()) return {};
  const int T = dataset.front().horizon();
  for (const auto& inst : dataset) {
    if (inst.horizon() != T) throw ValidationError("agreement_curve: instances have mixed horizons");
  }
  std::vector<std::vector<char>> agree(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    Rng a_rng = make_rng(options.seed, {kStreamEpisode, k});
    Rng b_rng = make_rng(options.seed, {kStreamEpisode, k});
    const auto a = rollout(dataset[k], policy, options.mode, a_rng, k).solution.decisions;
    const auto b = rollout(dataset[k], reference, options.mode, b_rng, k).solution.decisions;
    agree[k].resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) agree[k][static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t)] == b[static_cast<std::size_t>(t)];
  });
  std::vector<double> curve(static_cast<std::size_t>(T), 0.0);
  for (const auto& row : agree) {
    for (int t = 0; t < T; ++t) curve[static_cast<std::size_t>(t)] += row[static_cast<std::size_t>(t)];
  }
  for (double& c : curve) c /= static_cast<double>(dataset.size());
  return curve;
}

std::unique_ptr<Policy> oracle_policy(const Dataset& dataset, const std::vector<OracleResult>& oracle) {
  check_oracle(dataset, oracle);
  std::vector<std::vector<int>> targets;
  targets.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!oracle[i].optimal()) {
      throw DataError("oracle policy: instance " + std::to_string(i) + " has no optimal assignment");
    }
    targets.push_back(hindsight_targets(dataset[i], oracle[i]));
  }
  return make_replay_policy(std::move(targets));
}

std::vector<TransferCell> transfer_eval(const PolicyModel& model,
                                        const std::vector<std::pair<int, int>>& sizes,
                                        const GenSpec& family, int test_count, std::uint64_t seed,
                                        const BaseGraph* base, const OsbmLimits& limits) {
  auto policy = make_policy(model);
  std::vector<TransferCell> cells;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    TransferCell cell;
    cell.u_count = sizes[c].first;
    cell.v_count = sizes[c].second;
    const bool fits = is_invariant(input_kind(model.kind)) || !model.u_count || *model.u_count == cell.u_count;
    if (is_neural(model.kind) && !fits) {
      cells.push_back(cell);
      continue;
    }
    GenSpec spec = family;
    spec.u_count = cell.u_count;
    spec.v_count = cell.v_count;
    spec.count = test_count;
    spec.seed = derive_seed(seed, {kStreamTransfer, static_cast<std::uint64_t>(cell.u_count),
                                   static_cast<std::uint64_t>(cell.v_count)});
    const Dataset test = generate_dataset(spec, base);
    const auto oracle = solve_dataset(test, limits);
    EvalOptions opts;
    opts.seed = seed;
    cell.mean_ratio = evaluate(*policy, test, oracle, opts).summary.mean;
    cells.push_back(cell);
  }
  return cells;
}

std::vector<int> instance_permutation(int u_count, std::uint64_t seed, std::size_t index) {
  std::vector<int> perm(static_cast<std::size_t>(u_count));
  for (int u = 0; u < u_count; ++u) perm[static_cast<std::size_t>(u)] = u;
  Rng rng = make_rng(seed, {kStreamPermute, index});
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng() % i)]);
  }
  return perm;
}

Dataset permute_dataset(const Dataset& dataset, std::uint64_t seed) {
  Dataset out(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = permute_fixed_nodes(dataset[k], instance_permutation(dataset[k].u_count(), seed, k));
  });
  return out;
}

PermutationReport permutation_stress(const Policy& policy, const Dataset& dataset,
                                     const std::vector<OracleResult>& oracle,
                                     const EvalOptions& options) {
  PermutationReport rep;
  rep.original = evaluate(policy, dataset, oracle, options);
  rep.permuted = evaluate(policy, permute_dataset(dataset, options.seed), oracle, options);
  return rep;
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ostringstream out;
  out << "dataset_hash,instance_idx,policy,objective,opt,ratio,decode_mode,seed\n";
  for (const auto& o : report.rows) {
    out << report.dataset_hash << ',' << o.index << ',' << report.policy << ',' << format_double(o.objective)
        << ',' << format_double(o.opt) << ',' << format_double(o.ratio) << ',' << to_string(report.mode) << ','
        << report.seed << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_summary_json(const std::filesystem::path& path, const EvalReport& report) {
  const auto& s = report.summary;
  nlohmann::ordered_json j = {
      {"policy", report.policy},
      {"dataset_hash", report.dataset_hash},
      {"seed", report.seed},
      {"decode_mode", to_string(report.mode)},
      {"count", s.count},
      {"mean", s.mean},
      {"std", s.stddev},
      {"min", s.min},
      {"q1", s.q1},
      {"median", s.median},
      {"q3", s.q3},
      {"max", s.max},
      {"against_upper_bound", s.against_bound},
      {"out_of_range", s.out_of_range},
  };
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_agreement_csv(const std::filesystem::path& path, const std::vector<double>& curve) {
  std::ostringstream out;
  out << "timestep,fraction\n";
  for (std::size_t t = 0; t < curve.size(); ++t) out << t << ',' << format_double(curve[t]) << '\n';
  write_file_atomic(path, out.str());
}

void write_transfer_csv(const std::filesystem::path& path, const TransferRows& rows) {
  std::ostringstream out;
  out << "model,u_count,v_count,mean_ratio\n";
  for (const auto& [model_name, cells] : rows) {
    for (const auto& c : cells) {
      out << model_name << ',' << c.u_count << ',' << c.v_count << ','
          << (c.mean_ratio ? format_double(*c.mean_ratio) : std::string("-")) << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

}  // namespace matchlab
