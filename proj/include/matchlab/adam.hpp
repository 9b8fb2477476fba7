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

#ifndef MATCHLAB_ADAM_HPP_
#define MATCHLAB_ADAM_HPP_

#include <cstdint>

#include "matchlab/mlp.hpp"

namespace matchlab {

struct AdamState {
  MlpParams first_moment;
  MlpParams second_moment;
  std::int64_t step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_params(const MlpParams& params, double learning_rate);
};

// One bias-corrected Adam update in place. A non-finite gradient throws
// NumericError naming the offending block and leaves everything untouched.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

}  // namespace matchlab

#endif  // MATCHLAB_ADAM_HPP_
