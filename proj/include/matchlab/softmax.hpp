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

#ifndef MATCHLAB_SOFTMAX_HPP_
#define MATCHLAB_SOFTMAX_HPP_

#include <span>
#include <vector>

#include "matchlab/env.hpp"

namespace matchlab {

// Categorical distribution over action slots with illegal slots removed.
// Illegal slots have probability exactly 0 and log-probability -inf.
struct MaskedDistribution {
  std::vector<double> probs;
  std::vector<double> log_probs;
  double entropy = 0.0;
};

// Throws ContractViolation if no slot is legal or the sizes differ.
MaskedDistribution masked_softmax(std::span<const double> logits, const Mask& mask);

// Lowest-index slot among the legal maxima of `probs`.
int argmax_legal(const std::vector<double>& probs, const Mask& mask);

}  // namespace matchlab

#endif  // MATCHLAB_SOFTMAX_HPP_
