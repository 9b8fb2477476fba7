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

#include <cstdio>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "matchlab/baselines.hpp"
#include "matchlab/dataset_io.hpp"
#include "matchlab/error.hpp"
#include "matchlab/eval.hpp"
#include "matchlab/generators.hpp"
#include "matchlab/oracle_cache.hpp"
#include "matchlab/parallel.hpp"
#include "matchlab/text_format.hpp"
#include "matchlab/trainer.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace matchlab;
using matchlab::cli::Json;
using matchlab::cli::RunConfig;

namespace {

using Outputs = std::map<std::string, std::string>;

void note_output(Outputs& outs, const fs::path& p) { outs[p.generic_string()] = hash_file(p); }

GenSpec gen_spec_from(const Json& j, std::uint64_t seed) {
  GenSpec s;
  s.seed = seed;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "kind") s.kind = parse_gen_kind(v.get<std::string>());
      else if (key == "u") s.u_count = v.get<int>();
      else if (key == "v") s.v_count = v.get<int>();
      else if (key == "p") s.p = v.get<double>();
      else if (key == "count") s.count = v.get<int>();
      else if (key == "bid_lo") s.bid_lo = v.get<double>();
      else if (key == "bid_hi") s.bid_hi = v.get<double>();
      else if (key == "mode") {
        const auto m = v.get<std::string>();
        if (m == "fixed") s.mode = FixedNodeMode::kFixed;
        else if (m == "var") s.mode = FixedNodeMode::kVar;
        else throw ConfigError("mode must be 'fixed' or 'var'");
      } else if (key != "base_graph" && key != "file") {
        throw ConfigError("generate: unknown key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("generate: ") + e.what());
  }
  check_spec(s);
  return s;
}

std::optional<BaseGraph> base_graph_from(RunConfig& cfg, const Json& section) {
  if (!section.contains("base_graph")) return std::nullopt;
  const Json& b = section.at("base_graph");
  auto path_of = [&](const char* key) -> std::optional<fs::path> {
    if (!b.contains(key)) return std::nullopt;
    fs::path p = b.at(key).get<std::string>();
    cfg.record_input(p);
    return p;
  };
  const auto edges = path_of("edges");
  if (!edges) throw ConfigError("base_graph.edges is required");
  return load_base_graph(*edges, path_of("genres"), path_of("ratings"));
}

OsbmLimits limits_from(const RunConfig& cfg) {
  OsbmLimits l;
  if (!cfg.has("limits")) return l;
  const Json& j = cfg.section.at("limits");
  l.max_fixed = j.value("max_fixed", l.max_fixed);
  l.max_arrivals = j.value("max_arrivals", l.max_arrivals);
  l.max_genres = j.value("max_genres", l.max_genres);
  l.node_budget = j.value("node_budget", l.node_budget);
  return l;
}

struct LoadedDataset {
  Dataset data;
  std::string hash;
  fs::path path;
};

LoadedDataset load_dataset(RunConfig& cfg, const std::string& key) {
  LoadedDataset d;
  d.path = cfg.input(key);
  d.hash = hash_file(d.path);
  d.data = read_dataset(d.path);
  if (d.data.empty()) throw ValidationError(d.path.string() + ": dataset is empty");
  return d;
}

std::vector<OracleResult> oracle_for(const RunConfig& cfg, const LoadedDataset& d, CacheReport* rep = nullptr) {
  return load_or_solve(d.data, d.hash, oracle_cache_root(cfg.out / "cache"), limits_from(cfg), rep);
}

DecodeMode decode_from(const RunConfig& cfg) {
  const auto m = cfg.str_or("decode", "greedy");
  if (m == "greedy") return DecodeMode::kGreedy;
  if (m == "sample") return DecodeMode::kSample;
  throw ConfigError("decode must be 'greedy' or 'sample'");
}

// A policy named by checkpoint path (`<prefix>checkpoint`) or by kind
// (`<prefix>policy`). "oracle" replays the hindsight optimum.
std::unique_ptr<Policy> policy_from(RunConfig& cfg, const std::string& prefix, const LoadedDataset& d,
                                    const std::vector<OracleResult>& oracle) {
  if (cfg.has(prefix + "checkpoint")) {
    return make_policy(from_checkpoint(load_checkpoint(cfg.input(prefix + "checkpoint"))));
  }
  const auto name = cfg.str_or(prefix + "policy", "");
  if (name.empty()) throw ConfigError("set '" + prefix + "checkpoint' or '" + prefix + "policy'");
  if (name == "oracle") return oracle_policy(d.data, oracle);
  PolicyModel m;
  m.kind = parse_policy_kind(name);
  m.problem = d.data.front().kind();
  if (is_neural(m.kind) || m.kind == PolicyKind::kGreedyT || m.kind == PolicyKind::kGreedyRt) {
    throw ConfigError("policy '" + name + "' needs a checkpoint (train or tune-baseline first)");
  }
  return make_policy(m);
}

int cmd_generate(RunConfig& cfg) {
  const GenSpec spec = gen_spec_from(cfg.section, cfg.seed);
  const auto base = base_graph_from(cfg, cfg.section);
  const Dataset data = generate_dataset(spec, base ? &*base : nullptr);
  fs::create_directories(cfg.out);
  const fs::path path = cfg.out / cfg.str_or("file", "dataset.jsonl");
  write_dataset(data, path);
  Outputs outs;
  note_output(outs, path);
  cli::write_manifest(cfg, outs);
  std::cout << "dataset " << path.string() << " instances " << data.size() << " hash " << hash_file(path) << "\n";
  return 0;
}

int cmd_solve(RunConfig& cfg) {
  const auto d = load_dataset(cfg, "dataset");
  CacheReport rep;
  const auto oracle = oracle_for(cfg, d, &rep);
  const fs::path cache = oracle_cache_path(oracle_cache_root(cfg.out / "cache"), d.hash);
  if (rep.quarantined) std::cerr << "warning: unreadable cache moved to " << rep.quarantined->string() << "\n";
  Outputs outs;
  note_output(outs, cache);
  cli::write_manifest(cfg, outs);
  std::cout << "solved " << rep.solved << " reused " << rep.reused << " refused " << rep.refused << " cache "
            << cache.string() << "\n";
  if (rep.refused > 0) std::cerr << "warning: " << rep.refused << " instances refused by the oracle\n";
  return 0;
}

int cmd_tune_baseline(RunConfig& cfg) {
  const auto d = load_dataset(cfg, "dataset");
  PolicyModel m;
  m.kind = parse_policy_kind(cfg.str_or("policy", "greedy_t"));
  m.problem = d.data.front().kind();
  if (m.kind == PolicyKind::kGreedyT) {
    const ThresholdTuning t = tune_threshold(d.data);
    m.threshold = t.threshold;
    m.value_scale = t.value_scale;
    std::cout << "w_T = " << format_double(t.threshold) << "\n";
  } else if (m.kind == PolicyKind::kGreedyRt) {
    const auto rule = cfg.str_or("scaling", "divide_by_min");
    if (rule != "divide_by_min" && rule != "multiply_by_max") {
      throw ConfigError("scaling must be 'divide_by_min' or 'multiply_by_max'");
    }
    fit_greedy_rt(m, d.data, rule == "divide_by_min" ? RtScaling::kDivideByMin : RtScaling::kMultiplyByMax);
    std::cout << "weight_scale = " << format_double(m.rt_weight_scale) << " w_max = " << format_double(m.rt_w_max)
              << "\n";
  } else {
    throw ConfigError("tune-baseline supports greedy_t and greedy_rt");
  }
  fs::create_directories(cfg.out);
  const fs::path path = cfg.out / (std::string(to_string(m.kind)) + ".ckpt.json");
  Checkpoint c = to_checkpoint(m);
  c.seed_lineage = {cfg.seed};
  save_checkpoint(c, path);
  Outputs outs;
  note_output(outs, path);
  cli::write_manifest(cfg, outs);
  return 0;
}

int cmd_train(RunConfig& cfg) {
  const auto train_set = load_dataset(cfg, "dataset");
  std::optional<LoadedDataset> val;
  std::vector<OracleResult> val_oracle;
  if (cfg.has("validation")) {
    val = load_dataset(cfg, "validation");
    val_oracle = oracle_for(cfg, *val);
  }
  Json tc = cfg.section;
  for (const char* k : {"policy", "dataset", "validation", "resume", "limits"}) tc.erase(k);
  TrainRun run;
  run.config = TrainConfig::from_json(nlohmann::json::parse(tc.dump()));
  run.config.seed = cfg.seed;
  run.kind = parse_policy_kind(cfg.str_or("policy", "inv_ff_hist"));
  run.train = &train_set.data;
  if (val) {
    run.validation = &val->data;
    run.validation_oracle = &val_oracle;
  }
  std::vector<std::vector<int>> targets;
  if (run.kind == PolicyKind::kFfSupervised) {
    const auto oracle = oracle_for(cfg, train_set);
    for (std::size_t i = 0; i < oracle.size(); ++i) targets.push_back(hindsight_targets(train_set.data[i], oracle[i]));
    run.targets = &targets;
  }
  std::optional<Checkpoint> resume;
  if (cfg.has("resume")) {
    resume = load_checkpoint(cfg.input("resume"));
    run.resume = &*resume;
  }
  run.out_dir = cfg.out;
  const TrainOutcome r = train(run);
  Outputs outs;
  for (const char* f : {"last.ckpt.json", "best.ckpt.json", "train_log.csv", "validation.csv"}) {
    if (fs::exists(cfg.out / f)) note_output(outs, cfg.out / f);
  }
  cli::write_manifest(cfg, outs);
  std::cout << "epochs " << r.epochs_done << " best_validation " << format_double(r.best_validation) << "\n";
  return 0;
}

int cmd_evaluate(RunConfig& cfg) {
  const auto d = load_dataset(cfg, "dataset");
  const auto oracle = oracle_for(cfg, d);
  const auto policy = policy_from(cfg, "", d, oracle);
  EvalOptions opts{cfg.seed, decode_from(cfg), d.hash};
  const EvalReport rep = evaluate(*policy, d.data, oracle, opts);
  fs::create_directories(cfg.out);
  Outputs outs;
  write_report_csv(cfg.out / "report.csv", rep);
  write_summary_json(cfg.out / "summary.json", rep);
  note_output(outs, cfg.out / "report.csv");
  note_output(outs, cfg.out / "summary.json");
  cli::write_manifest(cfg, outs);
  std::cout << rep.policy << " mean_ratio " << format_double(rep.summary.mean) << "\n";
  if (rep.summary.out_of_range > 0) std::cerr << "warning: " << rep.summary.out_of_range << " ratios out of range\n";
  if (rep.summary.against_bound > 0) {
    std::cerr << "warning: " << rep.summary.against_bound << " ratios use an upper bound instead of OPT\n";
  }
  return 0;
}

int cmd_agreement(RunConfig& cfg) {
  const auto d = load_dataset(cfg, "dataset");
  const auto oracle = oracle_for(cfg, d);
  const auto policy = policy_from(cfg, "", d, oracle);
  if (!cfg.has("reference_checkpoint") && !cfg.has("reference_policy")) cfg.section["reference_policy"] = "oracle";
  const auto reference = policy_from(cfg, "reference_", d, oracle);
  EvalOptions opts{cfg.seed, decode_from(cfg), d.hash};
  const auto curve = agreement_curve(*policy, *reference, d.data, opts);
  fs::create_directories(cfg.out);
  write_agreement_csv(cfg.out / "agreement.csv", curve);
  Outputs outs;
  note_output(outs, cfg.out / "agreement.csv");
  cli::write_manifest(cfg, outs);
  std::cout << "agreement " << (cfg.out / "agreement.csv").string() << "\n";
  return 0;
}

int cmd_transfer(RunConfig& cfg) {
  std::vector<fs::path> ckpts;
  if (cfg.has("checkpoints")) {
    for (const auto& p : cfg.section.at("checkpoints")) {
      ckpts.emplace_back(p.get<std::string>());
      cfg.record_input(ckpts.back());
    }
  } else {
    ckpts.push_back(cfg.input("checkpoint"));
  }
  std::vector<std::pair<int, int>> sizes;
  if (!cfg.has("sizes")) throw ConfigError("transfer: 'sizes' is required");
  for (const auto& s : cfg.section.at("sizes")) sizes.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
  const Json family_json = cfg.has("family") ? cfg.section.at("family") : Json::object();
  const GenSpec family = gen_spec_from(family_json, cfg.seed);
  const auto base = base_graph_from(cfg, family_json);
  const int count = cfg.int_or("count", 100);
  TransferRows rows;
  for (const auto& p : ckpts) {
    const PolicyModel m = from_checkpoint(load_checkpoint(p));
    rows.emplace_back(p.stem().string(),
                      transfer_eval(m, sizes, family, count, cfg.seed, base ? &*base : nullptr, limits_from(cfg)));
  }
  fs::create_directories(cfg.out);
  const fs::path path = cfg.out / "transfer.csv";
  write_transfer_csv(path, rows);
  Outputs outs;
  note_output(outs, path);
  cli::write_manifest(cfg, outs);
  std::cout << read_file(path);
  return 0;
}

int cmd_permute(RunConfig& cfg) {
  const auto d = load_dataset(cfg, "dataset");
  const auto oracle = oracle_for(cfg, d);
  const auto policy = policy_from(cfg, "", d, oracle);
  EvalOptions opts{cfg.seed, decode_from(cfg), d.hash};
  const PermutationReport rep = permutation_stress(*policy, d.data, oracle, opts);
  fs::create_directories(cfg.out);
  Outputs outs;
  write_report_csv(cfg.out / "permute_original.csv", rep.original);
  write_report_csv(cfg.out / "permute_permuted.csv", rep.permuted);
  note_output(outs, cfg.out / "permute_original.csv");
  note_output(outs, cfg.out / "permute_permuted.csv");
  cli::write_manifest(cfg, outs);
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = sorted(rep.original.ratios());
  const auto b = sorted(rep.permuted.ratios());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
  std::cout << rep.original.policy << " mean_original " << format_double(rep.original.summary.mean)
            << " mean_permuted " << format_double(rep.permuted.summary.mean) << " max_multiset_diff "
            << format_double(max_diff) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchlab: learned online bipartite matching experiments"};
  app.require_subcommand(1);
  cli::FlagOverrides flags;
  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  auto* o_config = app.add_option("--config", config_path, "JSON config file (comments allowed)");
  auto* o_seed = app.add_option("--seed", seed, "global seed (overrides config)");
  auto* o_workers = app.add_option("--workers", workers, "worker threads for rollouts and evaluation");
  auto* o_out = app.add_option("--out", out, "output directory (overrides config)");
  app.fallthrough();

  using Handler = int (*)(RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"generate", "write a dataset", cmd_generate},
      {"solve", "populate the oracle cache", cmd_solve},
      {"train", "train a neural policy", cmd_train},
      {"evaluate", "optimality-ratio report", cmd_evaluate},
      {"agreement", "per-timestep agreement curve", cmd_agreement},
      {"transfer", "size-transfer matrix", cmd_transfer},
      {"permute", "fixed-node permutation stress test", cmd_permute},
      {"tune-baseline", "tune greedy-t or fit greedy-rt", cmd_tune_baseline},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*o_config) flags.config = config_path;
  if (*o_seed) flags.seed = seed;
  if (*o_workers) flags.workers = workers;
  if (*o_out) flags.out = out;

  try {
    for (const auto& [name, help, fn] : commands) {
      if (!app.got_subcommand(name)) continue;
      RunConfig cfg = cli::load_run_config(name, flags);
      if (cfg.workers > 0) set_workers(cfg.workers);
      return fn(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
