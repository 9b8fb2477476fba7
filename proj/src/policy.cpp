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

#include "matchlab/policy.hpp"

#include <cmath>

#include "matchlab/baselines.hpp"
#include "matchlab/error.hpp"
#include "matchlab/neural_policy.hpp"

namespace matchlab {

const char* to_string(DecodeMode mode) { return mode == DecodeMode::kGreedy ? "greedy" : "sample"; }

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kGreedyRt:
      return "greedy_rt";
    case PolicyKind::kGreedyT:
      return "greedy_t";
    case PolicyKind::kMsvv:
      return "msvv";
    case PolicyKind::kFf:
      return "ff";
    case PolicyKind::kFfHist:
      return "ff_hist";
    case PolicyKind::kInvFf:
      return "inv_ff";
    case PolicyKind::kInvFfHist:
      return "inv_ff_hist";
    case PolicyKind::kFfSupervised:
      return "ff_supervised";
    case PolicyKind::kOracleReplay:
      return "oracle";
  }
  return "?";
}

PolicyKind parse_policy_kind(const std::string& name) {
  std::string n = name;
  for (char& c : n) {
    if (c == '-') c = '_';
  }
  for (PolicyKind k : {PolicyKind::kGreedy, PolicyKind::kGreedyRt, PolicyKind::kGreedyT, PolicyKind::kMsvv,
                       PolicyKind::kFf, PolicyKind::kFfHist, PolicyKind::kInvFf, PolicyKind::kInvFfHist,
                       PolicyKind::kFfSupervised, PolicyKind::kOracleReplay}) {
    if (n == to_string(k)) return k;
  }
  throw ConfigError("unknown policy kind '" + name + "'");
}

bool is_neural(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFf:
    case PolicyKind::kFfHist:
    case PolicyKind::kInvFf:
    case PolicyKind::kInvFfHist:
    case PolicyKind::kFfSupervised:
      return true;
    default:
      return false;
  }
}

InputKind input_kind(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFf:
      return InputKind::kFf;
    case PolicyKind::kFfHist:
    case PolicyKind::kFfSupervised:
      return InputKind::kFfHist;
    case PolicyKind::kInvFf:
      return InputKind::kInvFf;
    case PolicyKind::kInvFfHist:
      return InputKind::kInvFfHist;
    default:
      throw ContractViolation(std::string(to_string(kind)) + " has no network input");
  }
}

std::vector<int> default_hidden_layers(PolicyKind kind) {
  if (is_invariant(input_kind(kind))) return {100, 100};
  return {100, 100, 100};
}

PolicyModel make_neural_model(PolicyKind kind, ProblemKind problem, int u_count, std::uint64_t seed,
                              std::vector<int> hidden) {
  if (!is_neural(kind)) throw ConfigError(std::string(to_string(kind)) + " is not a neural policy");
  if (hidden.empty()) hidden = default_hidden_layers(kind);
  const InputKind in = input_kind(kind);
  std::vector<int> dims{input_width(in, problem, u_count)};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(is_invariant(in) ? 1 : u_count + 1);
  PolicyModel m;
  m.kind = kind;
  m.problem = problem;
  m.params = init_params(dims, seed);
  if (!is_invariant(in)) m.u_count = u_count;
  return m;
}

namespace {

ProblemKind parse_problem(const std::string& s) {
  if (s == "eobm") return ProblemKind::kEobm;
  if (s == "osbm") return ProblemKind::kOsbm;
  if (s == "adwords") return ProblemKind::kAdwords;
  throw ValidationError("checkpoint: unknown problem kind '" + s + "'");
}

}  // namespace

Checkpoint to_checkpoint(const PolicyModel& model) {
  Checkpoint c;
  c.kind = to_string(model.kind);
  c.problem = to_string(model.problem);
  c.u_count = model.u_count;
  if (is_neural(model.kind)) c.params = model.params;
  switch (model.kind) {
    case PolicyKind::kGreedyT:
      c.scalars["threshold"] = model.threshold;
      c.scalars["value_scale"] = model.value_scale;
      break;
    case PolicyKind::kGreedyRt:
      c.scalars["weight_scale"] = model.rt_weight_scale;
      c.scalars["w_max"] = model.rt_w_max;
      break;
    default:
      break;
  }
  return c;
}

PolicyModel from_checkpoint(const Checkpoint& c) {
  PolicyModel m;
  m.kind = parse_policy_kind(c.kind);
  m.problem = parse_problem(c.problem);
  m.u_count = c.u_count;
  if (is_neural(m.kind)) {
    if (!c.params) throw ValidationError("checkpoint: neural kind without parameters");
    m.params = *c.params;
    const InputKind in = input_kind(m.kind);
    if (!is_invariant(in) && !m.u_count) throw ValidationError("checkpoint: missing u_count binding");
    const int expected = input_width(in, m.problem, m.u_count.value_or(0));
    if (m.params.input_dim() != expected) {
      throw ValidationError("checkpoint: input width " + std::to_string(m.params.input_dim()) +
                            " does not match " + c.kind + " (" + std::to_string(expected) + ")");
    }
  }
  m.threshold = c.scalars.value("threshold", 0.0);
  m.value_scale = c.scalars.value("value_scale", 1.0);
  m.rt_weight_scale = c.scalars.value("weight_scale", 1.0);
  m.rt_w_max = c.scalars.value("w_max", 1.0);
  return m;
}

void Policy::check_compatible(const BipartiteInstance&) const {}

EpisodeContext Policy::begin_episode(const BipartiteInstance&, std::size_t, Rng&) const { return {}; }

Decision Policy::act(const EpisodeContext& ctx, const BipartiteInstance& instance,
                     const EpisodeState& state, Rng& rng, DecodeMode) const {
  const MaskedDistribution d = distribution(ctx, instance, state);
  const int a = sample_slot(d, rng);
  return {a, d.log_probs[static_cast<std::size_t>(a)], d.entropy};
}

int sample_slot(const MaskedDistribution& d, Rng& rng) {
  int last_legal = -1;
  int count = 0;
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (d.probs[i] > 0.0) {
      last_legal = static_cast<int>(i);
      ++count;
    }
  }
  if (last_legal < 0) throw ContractViolation("sample_slot: empty distribution");
  if (count == 1) return last_legal;
  const double x = uniform01(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    if (d.probs[i] <= 0.0) continue;
    cum += d.probs[i];
    if (x < cum) return static_cast<int>(i);
  }
  return last_legal;
}

namespace {

MaskedDistribution one_hot(const BipartiteInstance& instance, const EpisodeState& state, int action) {
  Mask mask = legal_mask(instance, state);
  std::vector<double> logits(mask.size(), 0.0);
  Mask only(mask.size(), 0);
  only[static_cast<std::size_t>(action)] = 1;
  if (!mask[static_cast<std::size_t>(action)]) {
    throw ContractViolation("baseline chose illegal action " + std::to_string(action));
  }
  return masked_softmax(logits, only);
}

class GreedyPolicy final : public Policy {
 public:
  std::string name() const override { return "greedy"; }
  MaskedDistribution distribution(const EpisodeContext&, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override {
    return one_hot(instance, state, greedy_act(instance, state));
  }
};

class GreedyTPolicy final : public Policy {
 public:
  GreedyTPolicy(double threshold, double scale) : threshold_(threshold), scale_(scale) {}
  std::string name() const override { return "greedy_t"; }
  MaskedDistribution distribution(const EpisodeContext&, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override {
    return one_hot(instance, state, greedy_t_act(instance, state, threshold_, scale_));
  }

 private:
  double threshold_;
  double scale_;
};

class GreedyRtPolicy final : public Policy {
 public:
  GreedyRtPolicy(double weight_scale, double w_max) : weight_scale_(weight_scale), w_max_(w_max) {
    greedy_rt_threshold_count(w_max_);
  }
  std::string name() const override { return "greedy_rt"; }
  EpisodeContext begin_episode(const BipartiteInstance&, std::size_t, Rng& rng) const override {
    EpisodeContext ctx;
    ctx.tau = greedy_rt_draw_threshold(w_max_, rng);
    return ctx;
  }
  MaskedDistribution distribution(const EpisodeContext& ctx, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override {
    const auto candidates = greedy_rt_candidates(instance, state, ctx.tau, weight_scale_);
    Mask only(static_cast<std::size_t>(instance.u_count() + 1), 0);
    if (candidates.empty()) {
      only[static_cast<std::size_t>(skip_action(instance))] = 1;
    } else {
      for (int u : candidates) only[static_cast<std::size_t>(u)] = 1;
    }
    std::vector<double> logits(only.size(), 0.0);
    return masked_softmax(logits, only);
  }

 private:
  double weight_scale_;
  double w_max_;
};

class MsvvPolicy final : public Policy {
 public:
  std::string name() const override { return "msvv"; }
  void check_compatible(const BipartiteInstance& instance) const override {
    if (instance.kind() != ProblemKind::kAdwords) throw ContractViolation("msvv: Adwords instances only");
  }
  MaskedDistribution distribution(const EpisodeContext&, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override {
    return one_hot(instance, state, msvv_act(instance, state));
  }
};

class ReplayPolicy final : public Policy {
 public:
  explicit ReplayPolicy(std::vector<std::vector<int>> targets) : targets_(std::move(targets)) {}
  std::string name() const override { return "oracle"; }
  EpisodeContext begin_episode(const BipartiteInstance& instance, std::size_t index, Rng&) const override {
    if (index >= targets_.size() ||
        targets_[index].size() != static_cast<std::size_t>(instance.horizon())) {
      throw ContractViolation("oracle replay: no targets for instance " + std::to_string(index));
    }
    EpisodeContext ctx;
    ctx.replay = &targets_[index];
    return ctx;
  }
  MaskedDistribution distribution(const EpisodeContext& ctx, const BipartiteInstance& instance,
                                  const EpisodeState& state) const override {
    return one_hot(instance, state, (*ctx.replay)[static_cast<std::size_t>(state.t)]);
  }

 private:
  std::vector<std::vector<int>> targets_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicyModel& model) {
  switch (model.kind) {
    case PolicyKind::kGreedy:
      return std::make_unique<GreedyPolicy>();
    case PolicyKind::kGreedyT:
      return std::make_unique<GreedyTPolicy>(model.threshold, model.value_scale);
    case PolicyKind::kGreedyRt:
      return std::make_unique<GreedyRtPolicy>(model.rt_weight_scale, model.rt_w_max);
    case PolicyKind::kMsvv:
      return std::make_unique<MsvvPolicy>();
    case PolicyKind::kOracleReplay:
      throw ContractViolation("oracle replay policies are built from oracle results");
    default:
      return std::make_unique<NeuralPolicy>(model);
  }
}

std::unique_ptr<Policy> make_replay_policy(std::vector<std::vector<int>> targets) {
  return std::make_unique<ReplayPolicy>(std::move(targets));
}

RolloutResult rollout(const BipartiteInstance& instance, const Policy& policy, DecodeMode mode, Rng& rng,
                      std::size_t instance_index) {
  policy.check_compatible(instance);
  EpisodeContext ctx = policy.begin_episode(instance, instance_index, rng);
  EpisodeState state = reset(instance);
  RolloutResult out;
  out.trajectory.reserve(static_cast<std::size_t>(instance.horizon()));
  while (!state.terminal(instance)) {
    const Decision d = policy.act(ctx, instance, state, rng, mode);
    step(instance, state, d.action);
    out.trajectory.push_back({d.action, d.log_prob, d.entropy});
  }
  out.solution = to_solution(state);
  return out;
}

}  // namespace matchlab
