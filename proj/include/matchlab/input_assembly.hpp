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

#ifndef MATCHLAB_INPUT_ASSEMBLY_HPP_
#define MATCHLAB_INPUT_ASSEMBLY_HPP_

#include <string>

#include <Eigen/Core>

#include "matchlab/env.hpp"

namespace matchlab {

enum class InputKind { kFf, kFfHist, kInvFf, kInvFfHist };

const char* to_string(InputKind kind);
InputKind parse_input_kind(const std::string& name);

// Invariant kinds feed one row per slot through a shared network; the others
// feed a single row for the whole decision.
bool is_invariant(InputKind kind);

// Width of one input row. For invariant kinds this does not depend on
// u_count.
//   ff          2(U+1)        Adwords: + (U+1) remaining budgets
//   ff_hist     5(U+1) + 8    Adwords: + 2(U+1) remaining and initial budgets
//   inv_ff      3             Adwords: + 1
//   inv_ff_hist 16            Adwords: + 2
int input_width(InputKind kind, ProblemKind problem, int u_count);

// Largest weight-valued quantity visible at the current decision; every
// weight-valued input is divided by it.
double weight_scale(const BipartiteInstance& instance, const EpisodeState& state);

// Weight shown to the network for slot u of the current arrival: the edge
// weight (bid for Adwords) or, for OSBM, the current marginal coverage gain.
// Zero when u does not neighbour the arrival.
double input_weight(const BipartiteInstance& instance, const EpisodeState& state, int u);

// Rows: 1 for non-invariant kinds, u_count + 1 for invariant kinds (slot
// order, skip last).
Eigen::MatrixXd assemble_input(InputKind kind, const BipartiteInstance& instance,
                               const EpisodeState& state);

}  // namespace matchlab

#endif  // MATCHLAB_INPUT_ASSEMBLY_HPP_
