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

#include "matchlab/trainer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "matchlab/error.hpp"
#include "matchlab/eval.hpp"
#include "matchlab/supervised.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

using nlohmann::json;

void TrainConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("train: " + m); };
  if (epochs < 0) fail("epochs must be >= 0");
  if (dataset_size <= 0) fail("dataset_size must be positive");
  if (batch_size <= 0) fail("batch_size must be positive");
  if (batch_size > dataset_size) fail("batch_size exceeds dataset_size");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
  if (!(lr_decay > 0.0) || lr_decay > 1.0) fail("lr_decay must lie in (0, 1]");
  if (!(ema_decay >= 0.0 && ema_decay <= 1.0)) fail("ema_decay must lie in [0, 1]");
  if (!(entropy_rate >= 0.0) || !std::isfinite(entropy_rate)) fail("entropy_rate must be >= 0");
  if (eval_every < 0) fail("eval_every must be >= 0");
  for (int h : hidden) {
    if (h <= 0) fail("hidden layer widths must be positive");
  }
}

json TrainConfig::to_json() const {
  return {{"epochs", epochs},           {"dataset_size", dataset_size}, {"batch_size", batch_size},
          {"learning_rate", learning_rate}, {"lr_decay", lr_decay},    {"ema_decay", ema_decay},
          {"entropy_rate", entropy_rate}, {"seed", seed},              {"eval_every", eval_every},
          {"hidden", hidden}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  if (!j.is_object()) throw ConfigError("train: expected an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "epochs") c.epochs = v.get<int>();
      else if (key == "dataset_size") c.dataset_size = v.get<int>();
      else if (key == "batch_size") c.batch_size = v.get<int>();
      else if (key == "learning_rate") c.learning_rate = v.get<double>();
      else if (key == "lr_decay") c.lr_decay = v.get<double>();
      else if (key == "ema_decay") c.ema_decay = v.get<double>();
      else if (key == "entropy_rate") c.entropy_rate = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "eval_every") c.eval_every = v.get<int>();
      else if (key == "hidden") c.hidden = v.get<std::vector<int>>();
      else throw ConfigError("train: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  return c;
}

double validation_ratio(const PolicyModel& model, const Dataset& dataset,
                        const std::vector<OracleResult>& oracle, std::uint64_t seed) {
  auto policy = make_policy(model);
  EvalOptions opts;
  opts.seed = seed;
  return evaluate(*policy, dataset, oracle, opts).summary.mean;
}

namespace {

bool is_supervised(PolicyKind k) { return k == PolicyKind::kFfSupervised; }

void append_text(const std::filesystem::path& path, const std::string& header, const std::string& rows) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for append");
  if (fresh) out << header;
  out << rows;
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint make_checkpoint(const PolicyModel& model, const TrainRun& run, const TrainingSnapshot* snap) {
  Checkpoint c = to_checkpoint(model);
  c.config = run.config.to_json();
  c.seed_lineage = {run.config.seed, derive_seed(run.config.seed, {kStreamInit})};
  if (snap != nullptr) c.training = *snap;
  return c;
}

}  // namespace

TrainOutcome train(const TrainRun& run) {
  const TrainConfig& cfg = run.config;
  cfg.validate();
  if (run.train == nullptr || run.train->empty()) throw ConfigError("train: empty training dataset");
  if (!is_neural(run.kind) || run.kind == PolicyKind::kOracleReplay) {
    throw ConfigError(std::string("train: ") + to_string(run.kind) + " is not trainable");
  }
  if (is_supervised(run.kind) && run.targets == nullptr) throw ConfigError("train: supervised kind needs oracle targets");
  const bool validating = cfg.eval_every > 0 && run.validation != nullptr && !run.validation->empty();
  if (validating && run.validation_oracle == nullptr) throw ConfigError("train: validation set without oracle values");

  const std::size_t used = std::min(run.train->size(), static_cast<std::size_t>(cfg.dataset_size));
  const Dataset train_set(run.train->begin(), run.train->begin() + static_cast<std::ptrdiff_t>(used));
  if (static_cast<std::size_t>(cfg.batch_size) > train_set.size()) {
    throw ConfigError("train: batch_size exceeds the number of training instances");
  }
  const BipartiteInstance& first = train_set.front();

  TrainOutcome out;
  AdamState adam;
  BaselineState baseline;
  int start_epoch = 0;
  if (run.resume != nullptr) {
    out.last = from_checkpoint(*run.resume);
    if (out.last.kind != run.kind) throw ConfigError("train: resume checkpoint holds a different policy kind");
    if (!run.resume->training) throw ConfigError("train: resume checkpoint has no training state");
    const TrainingSnapshot& s = *run.resume->training;
    start_epoch = s.epochs_done;
    adam = s.adam;
    baseline.value = s.baseline;
    baseline.initialized = s.baseline_initialized;
    out.best_validation = s.best_validation;
    out.best = out.last;
    const auto best_path = run.out_dir / "best.ckpt.json";
    if (!run.out_dir.empty() && std::filesystem::exists(best_path)) out.best = from_checkpoint(load_checkpoint(best_path));
  } else {
    out.last = make_neural_model(run.kind, first.kind(), first.u_count(),
                                 derive_seed(cfg.seed, {kStreamInit}), cfg.hidden);
    adam = AdamState::for_params(out.last.params, cfg.learning_rate);
    out.best = out.last;
    if (validating) {
      out.best_validation = validation_ratio(out.last, *run.validation, *run.validation_oracle, cfg.seed);
      out.validation.emplace_back(0, out.best_validation);
    }
  }

  std::vector<LabeledEpisode> labeled;
  if (is_supervised(run.kind)) {
    const std::vector<std::vector<int>> targets(run.targets->begin(),
                                                run.targets->begin() + static_cast<std::ptrdiff_t>(used));
    labeled = label_dataset(out.last, train_set, targets);
  }

  if (!run.out_dir.empty()) std::filesystem::create_directories(run.out_dir);
  auto flush_validation = [&](std::size_t from) {
    if (run.out_dir.empty()) return;
    std::ostringstream rows;
    for (std::size_t i = from; i < out.validation.size(); ++i) {
      rows << out.validation[i].first << ',' << format_double(out.validation[i].second) << '\n';
    }
    append_text(run.out_dir / "validation.csv", "epoch,mean_ratio\n", rows.str());
  };
  flush_validation(0);

  ReinforceSettings rs;
  rs.batch_size = cfg.batch_size;
  rs.ema_decay = cfg.ema_decay;
  rs.entropy_rate = cfg.entropy_rate;
  rs.lr_decay = cfg.lr_decay;
  rs.seed = cfg.seed;

  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    std::ostringstream rows;
    if (is_supervised(run.kind)) {
      for (const auto& s : supervised_epoch(out.last, labeled, epoch, cfg.batch_size, cfg.lr_decay, cfg.seed, adam)) {
        rows << s.epoch << ',' << s.batch << ',' << format_double(s.loss) << ',' << format_double(s.learning_rate) << '\n';
        BatchStats b;
        b.epoch = s.epoch;
        b.batch = s.batch;
        b.mean_cost = s.loss;
        b.learning_rate = s.learning_rate;
        out.log.push_back(b);
      }
    } else {
      for (const auto& s : reinforce_epoch(out.last, train_set, epoch, rs, baseline, adam)) {
        rows << s.epoch << ',' << s.batch << ',' << format_double(s.mean_reward) << ','
             << format_double(s.mean_cost) << ',' << format_double(s.baseline) << ','
             << format_double(s.learning_rate) << ',' << format_double(s.entropy) << '\n';
        out.log.push_back(s);
      }
    }
    out.epochs_done = epoch + 1;
    if (!run.out_dir.empty()) {
      append_text(run.out_dir / "train_log.csv",
                  is_supervised(run.kind) ? "epoch,batch,loss,lr\n"
                                          : "epoch,batch,mean_reward,mean_cost,baseline,lr,entropy\n",
                  rows.str());
    }
    if (validating && (out.epochs_done % cfg.eval_every == 0 || out.epochs_done == cfg.epochs)) {
      const double v = validation_ratio(out.last, *run.validation, *run.validation_oracle, cfg.seed);
      const std::size_t from = out.validation.size();
      out.validation.emplace_back(out.epochs_done, v);
      flush_validation(from);
      if (v > out.best_validation) {
        out.best_validation = v;
        out.best = out.last;
        if (!run.out_dir.empty()) save_checkpoint(make_checkpoint(out.best, run, nullptr), run.out_dir / "best.ckpt.json");
      }
    } else if (!validating) {
      out.best = out.last;
    }
    if (!run.out_dir.empty()) {
      TrainingSnapshot snap{out.epochs_done, adam.learning_rate, baseline.value, baseline.initialized, adam,
                            out.best_validation};
      save_checkpoint(make_checkpoint(out.last, run, &snap), run.out_dir / "last.ckpt.json");
    }
  }
  out.epochs_done = std::max(out.epochs_done, start_epoch);
  if (!run.out_dir.empty()) {
    TrainingSnapshot snap{out.epochs_done, adam.learning_rate, baseline.value, baseline.initialized, adam,
                          out.best_validation};
    save_checkpoint(make_checkpoint(out.last, run, &snap), run.out_dir / "last.ckpt.json");
    save_checkpoint(make_checkpoint(out.best, run, nullptr), run.out_dir / "best.ckpt.json");
  }
  return out;
}

}  // namespace matchlab
