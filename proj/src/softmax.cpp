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

#include "matchlab/softmax.hpp"

#include <cmath>
#include <limits>

#include "matchlab/error.hpp"

namespace matchlab {

MaskedDistribution masked_softmax(std::span<const double> logits, const Mask& mask) {
  if (logits.size() != mask.size()) throw ContractViolation("masked_softmax: size mismatch");
  double max_logit = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    any = true;
    max_logit = std::max(max_logit, logits[i]);
  }
  if (!any) throw ContractViolation("masked_softmax: no legal slot");

  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) total += std::exp(logits[i] - max_logit);
  }
  const double log_total = std::log(total);

  MaskedDistribution d;
  d.probs.assign(logits.size(), 0.0);
  d.log_probs.assign(logits.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    d.log_probs[i] = logits[i] - max_logit - log_total;
    d.probs[i] = std::exp(d.log_probs[i]);
    d.entropy -= d.probs[i] * d.log_probs[i];
  }
  return d;
}

int argmax_legal(const std::vector<double>& probs, const Mask& mask) {
  int best = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!mask[i]) continue;
    if (best < 0 || probs[i] > probs[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  if (best < 0) throw ContractViolation("argmax_legal: no legal slot");
  return best;
}

}  // namespace matchlab
