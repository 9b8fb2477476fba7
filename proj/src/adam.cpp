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

#include "matchlab/adam.hpp"

#include <cmath>

#include "matchlab/error.hpp"

namespace matchlab {

AdamState AdamState::for_params(const MlpParams& params, double learning_rate) {
  AdamState s;
  s.first_moment = params.zeros_like();
  s.second_moment = params.zeros_like();
  s.learning_rate = learning_rate;
  return s;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  if (grads.layers.size() != params.layers.size() || state.first_moment.layers.size() != params.layers.size()) {
    throw ContractViolation("adam_step: shape mismatch");
  }
  if (auto bad = grads.first_non_finite_block(); !bad.empty()) {
    throw NumericError("adam_step: non-finite gradient in " + bad);
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    p.array() -= state.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + state.epsilon);
  };
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    update(params.layers[k].weight, grads.layers[k].weight, state.first_moment.layers[k].weight,
           state.second_moment.layers[k].weight);
    update(params.layers[k].bias, grads.layers[k].bias, state.first_moment.layers[k].bias,
           state.second_moment.layers[k].bias);
  }
  ++params.revision;
}

}  // namespace matchlab
