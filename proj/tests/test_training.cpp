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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "matchlab/checkpoint.hpp"
#include "matchlab/error.hpp"
#include "matchlab/neural_policy.hpp"
#include "matchlab/oracle.hpp"
#include "matchlab/reinforce.hpp"
#include "matchlab/supervised.hpp"
#include "matchlab/trainer.hpp"
#include "support.hpp"

namespace matchlab {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("matchlab_train_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  return p;
}

Eigen::MatrixXd stacked_inputs(const std::vector<RecordedEpisode>& batch) {
  Eigen::Index rows = 0;
  for (const auto& ep : batch) {
    for (const auto& s : ep.steps) rows += s.input.rows();
  }
  Eigen::MatrixXd out(rows, batch.front().steps.front().input.cols());
  Eigen::Index r = 0;
  for (const auto& ep : batch) {
    for (const auto& s : ep.steps) {
      out.middleRows(r, s.input.rows()) = s.input;
      r += s.input.rows();
    }
  }
  return out;
}

TEST(Baseline, EmaExample) {
  BaselineState b;
  b.update(10.0, 0.8);
  EXPECT_EQ(b.value, 10.0);
  b.update(5.0, 0.8);
  EXPECT_NEAR(b.value, 9.0, 1e-15);
}

TEST(Baseline, ClosedForm) {
  Rng rng(1);
  const double beta = 0.7;
  std::vector<double> m(30);
  for (double& x : m) x = 10.0 * uniform01(rng);
  BaselineState b;
  b.update(m[0], beta);
  const double b0 = m[0];
  for (std::size_t k = 1; k < m.size(); ++k) {
    b.update(m[k], beta);
    double closed = std::pow(beta, static_cast<double>(k)) * b0;
    for (std::size_t j = 1; j <= k; ++j) closed += (1.0 - beta) * std::pow(beta, static_cast<double>(k - j)) * m[j];
    EXPECT_NEAR(b.value, closed, 1e-10);
  }
}

TEST(Reinforce, ZeroAdvantageGivesZeroGradient) {
  Rng rng(2);
  const auto model = make_neural_model(PolicyKind::kInvFfHist, ProblemKind::kEobm, 4, 3);
  const auto inst = testing::random_eobm(rng, 4, 6);
  auto ep = record_episode(model, inst, rng);
  const double cost = -ep.reward;
  const auto g = surrogate_gradient(model, {ep}, cost, 0.0);
  for (double x : g.flatten()) EXPECT_EQ(x, 0.0);
}

TEST(Reinforce, EpochWithoutChoicesLeavesParams) {
  // Empty arrivals: skip is the only action, so every cost equals the baseline.
  Dataset d;
  for (int i = 0; i < 4; ++i) d.emplace_back(3, std::vector<Arrival>(5), EobmPayload{});
  auto model = make_neural_model(PolicyKind::kInvFf, ProblemKind::kEobm, 3, 4);
  const auto before = model.params.flatten();
  auto adam = AdamState::for_params(model.params, 1e-2);
  BaselineState b;
  ReinforceSettings s;
  s.batch_size = 2;
  s.entropy_rate = 0.0;
  reinforce_epoch(model, d, 0, s, b, adam);
  EXPECT_EQ(model.params.flatten(), before);
}

TEST(Reinforce, SurrogateGradientMatchesFiniteDifferences) {
  Rng rng(5);
  int checked = 0;
  for (auto kind : {PolicyKind::kInvFfHist, PolicyKind::kFfHist, PolicyKind::kInvFf, PolicyKind::kFf}) {
    for (int attempt = 0; attempt < 20 && checked < 4 * 2; ++attempt) {
      const auto model = make_neural_model(kind, ProblemKind::kEobm, 3, rng(), {6, 5});
      std::vector<RecordedEpisode> batch;
      for (int i = 0; i < 3; ++i) batch.push_back(record_episode(model, testing::random_eobm(rng, 3, 4), rng));
      if (testing::min_abs_preactivation(model.params, stacked_inputs(batch)) < 1e-3) continue;
      const double b = -0.5;
      const double gamma = 0.05;
      const auto g = surrogate_gradient(model, batch, b, gamma);
      auto loss = [&](const MlpParams& q) {
        auto m = model;
        m.params = q;
        return surrogate_loss(m, batch, b, gamma);
      };
      EXPECT_LE(testing::max_relative_error(g.flatten(), testing::numeric_gradient(model.params, loss)), 1e-4)
          << to_string(kind);
      ++checked;
      if (checked % 2 == 0) break;
    }
  }
  EXPECT_EQ(checked, 8);
}

TEST(Reinforce, BanditConverges) {
  // Two fixed nodes, one arrival: one node carries 1, the other 0.1.
  Rng rng(6);
  Dataset d;
  for (int i = 0; i < 20; ++i) {
    const int hi = static_cast<int>(rng() % 2);
    d.emplace_back(2, std::vector<Arrival>{Arrival{{{0, hi == 0 ? 1.0 : 0.1}, {1, hi == 1 ? 1.0 : 0.1}}, std::nullopt}},
                   EobmPayload{});
  }
  auto model = make_neural_model(PolicyKind::kInvFf, ProblemKind::kEobm, 2, 7);
  auto adam = AdamState::for_params(model.params, 1e-2);
  BaselineState b;
  ReinforceSettings s;
  s.batch_size = 20;
  s.lr_decay = 1.0;
  for (int epoch = 0; epoch < 200; ++epoch) reinforce_epoch(model, d, epoch, s, b, adam);
  for (const auto& inst : d) {
    const auto ev = evaluate_neural(model, inst, reset(inst));
    const int best = inst.arrival(0).edges[0].w == 1.0 ? 0 : 1;
    EXPECT_GE(ev.dist.probs[static_cast<std::size_t>(best)], 0.99);
  }
}

TEST(Reinforce, EpochOrderIsPermutation) {
  const auto a = epoch_order(50, 3, 2);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(a, epoch_order(50, 3, 2));
  EXPECT_NE(a, epoch_order(50, 3, 3));
}

TEST(Supervised, ClassWeights) {
  const BipartiteInstance a(10, std::vector<Arrival>(30), EobmPayload{});
  EXPECT_NEAR(skip_class_weight(a), 1.0 / 3.0, 1e-15);
  const BipartiteInstance b(4, std::vector<Arrival>(4), EobmPayload{});
  EXPECT_EQ(skip_class_weight(b), 1.0);
}

TEST(Supervised, UniformPredictionLoss) {
  auto model = make_neural_model(PolicyKind::kFfSupervised, ProblemKind::kEobm, 2, 1);
  model.params = model.params.zeros_like();
  const BipartiteInstance inst(2, {Arrival{{{0, 0.4}, {1, 0.6}}, std::nullopt}}, EobmPayload{});
  EXPECT_NEAR(weighted_cross_entropy(model, {label_episode(model, inst, {0}, 0)}), std::log(3.0), 1e-12);
  EXPECT_NEAR(weighted_cross_entropy(model, {label_episode(model, inst, {2}, 0)}), 2.0 * std::log(3.0), 1e-12);
}

TEST(Supervised, IllegalTargetNamesLocation) {
  const auto model = make_neural_model(PolicyKind::kFfSupervised, ProblemKind::kEobm, 2, 1);
  const BipartiteInstance inst(2, {Arrival{{{0, 0.4}}, std::nullopt}}, EobmPayload{});
  try {
    label_episode(model, inst, {1}, 7);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("instance 7, timestep 0"), std::string::npos);
  }
}

TEST(Supervised, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  int checked = 0;
  for (int attempt = 0; attempt < 30 && checked < 3; ++attempt) {
    const auto model = make_neural_model(PolicyKind::kFfSupervised, ProblemKind::kEobm, 3, rng(), {7, 4});
    Dataset d;
    std::vector<std::vector<int>> targets;
    for (int i = 0; i < 3; ++i) {
      d.push_back(testing::random_eobm(rng, 3, 4));
      targets.push_back(hindsight_targets(d.back(), solve_eobm(d.back())));
    }
    const auto batch = label_dataset(model, d, targets);
    std::vector<RecordedEpisode> eps;
    for (const auto& l : batch) eps.push_back(l.episode);
    if (testing::min_abs_preactivation(model.params, stacked_inputs(eps)) < 1e-3) continue;
    double loss_value = 0.0;
    const auto g = weighted_cross_entropy_gradient(model, batch, &loss_value);
    EXPECT_NEAR(loss_value, weighted_cross_entropy(model, batch), 1e-12);
    auto loss = [&](const MlpParams& q) {
      auto m = model;
      m.params = q;
      return weighted_cross_entropy(m, batch);
    };
    EXPECT_LE(testing::max_relative_error(g.flatten(), testing::numeric_gradient(model.params, loss)), 1e-4);
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(Supervised, LossDecreasesOverFirstEpochs) {
  Rng rng(9);
  Dataset d;
  std::vector<std::vector<int>> targets;
  for (int i = 0; i < 100; ++i) {
    d.push_back(testing::random_eobm(rng, 10, 30, 0.3));
    targets.push_back(hindsight_targets(d.back(), solve_eobm(d.back())));
  }
  auto model = make_neural_model(PolicyKind::kFfSupervised, ProblemKind::kEobm, 10, 10);
  const auto data = label_dataset(model, d, targets);
  auto adam = AdamState::for_params(model.params, 1e-3);
  double prev = weighted_cross_entropy(model, data);
  for (int epoch = 0; epoch < 5; ++epoch) {
    supervised_epoch(model, data, epoch, 20, 0.98, 11, adam);
    const double now = weighted_cross_entropy(model, data);
    EXPECT_LT(now, prev) << "epoch " << epoch;
    prev = now;
  }
}

TEST(Trainer, ConfigValidation) {
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.ema_decay = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(TrainConfig::from_json(nlohmann::json{{"epochz", 3}}), ConfigError);
  c = TrainConfig{};
  c.epochs = 7;
  c.hidden = {5, 5};
  EXPECT_EQ(TrainConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(Trainer, ZeroEpochsKeepsInitialization) {
  Rng rng(12);
  Dataset d;
  for (int i = 0; i < 4; ++i) d.push_back(testing::random_eobm(rng, 3, 5));
  TrainRun run;
  run.kind = PolicyKind::kInvFf;
  run.config.epochs = 0;
  run.config.batch_size = 2;
  run.config.seed = 21;
  run.train = &d;
  const auto out = train(run);
  const auto init = make_neural_model(PolicyKind::kInvFf, ProblemKind::kEobm, 3, derive_seed(21, {kStreamInit}));
  EXPECT_EQ(out.last.params.flatten(), init.params.flatten());
  EXPECT_EQ(out.epochs_done, 0);
}

TEST(Trainer, ResumeMatchesStraightRun) {
  Rng rng(13);
  Dataset d;
  Dataset v;
  for (int i = 0; i < 12; ++i) d.push_back(testing::random_eobm(rng, 4, 6));
  for (int i = 0; i < 5; ++i) v.push_back(testing::random_eobm(rng, 4, 6));
  const auto vo = solve_dataset(v);

  TrainRun run;
  run.kind = PolicyKind::kInvFfHist;
  run.config.batch_size = 4;
  run.config.seed = 5;
  run.config.hidden = {8};
  run.config.learning_rate = 1e-2;
  run.train = &d;
  run.validation = &v;
  run.validation_oracle = &vo;

  const auto straight_dir = scratch_dir("straight");
  run.config.epochs = 4;
  run.out_dir = straight_dir;
  const auto straight = train(run);

  const auto split_dir = scratch_dir("split");
  run.out_dir = split_dir;
  run.config.epochs = 2;
  train(run);
  const auto ckpt = load_checkpoint(split_dir / "last.ckpt.json");
  run.config.epochs = 4;
  run.resume = &ckpt;
  const auto resumed = train(run);

  EXPECT_EQ(resumed.last.params.flatten(), straight.last.params.flatten());
  EXPECT_EQ(resumed.epochs_done, 4);
  EXPECT_EQ(slurp(split_dir / "train_log.csv"), slurp(straight_dir / "train_log.csv"));
  EXPECT_EQ(slurp(split_dir / "validation.csv"), slurp(straight_dir / "validation.csv"));
  EXPECT_EQ(slurp(split_dir / "best.ckpt.json"), slurp(straight_dir / "best.ckpt.json"));
  fs::remove_all(straight_dir);
  fs::remove_all(split_dir);
}

TEST(Trainer, SupervisedRunNeedsTargets) {
  Rng rng(14);
  Dataset d{testing::random_eobm(rng, 3, 4)};
  TrainRun run;
  run.kind = PolicyKind::kFfSupervised;
  run.config.batch_size = 1;
  run.train = &d;
  EXPECT_THROW(train(run), ConfigError);
}

}  // namespace
}  // namespace matchlab
