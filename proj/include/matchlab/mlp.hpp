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

#ifndef MATCHLAB_MLP_HPP_
#define MATCHLAB_MLP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace matchlab {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Parameters of a ReLU multilayer perceptron; the output layer is linear.
// Also used as the gradient and Adam-moment container, since they share the
// shape.
struct MlpParams {
  std::vector<DenseLayer> layers;
  // Bumped on every in-place update; tapes remember it to detect staleness.
  std::uint64_t revision = 0;

  std::vector<int> dims() const;
  std::size_t parameter_count() const;
  int input_dim() const { return static_cast<int>(layers.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().weight.rows()); }

  // Name of the first block holding a non-finite value, or empty.
  std::string first_non_finite_block() const;

  MlpParams zeros_like() const;
  void add_scaled(const MlpParams& other, double scale);

  // All coordinates in a fixed order (layer by layer, weight row-major, then
  // bias). Used by finite-difference checks and serialization.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);
};

// Glorot-uniform weights in +-sqrt(6 / (in + out)), zero biases.
MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed);

MlpParams zero_params(const std::vector<int>& dims);

// Activations kept by forward() for the backward pass.
struct Tape {
  std::vector<Eigen::MatrixXd> inputs;  // input to each layer, rows = samples
  const MlpParams* params = nullptr;
  std::uint64_t revision = 0;
};

// Batched forward pass: each row of `x` is one sample. Returns one output
// row per sample.
Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& x, Tape* tape = nullptr);

// Gradient of sum_ij upstream(i, j) * output(i, j) with respect to every
// parameter. ReLU'(0) is taken as 0. Throws if `params` changed since the
// tape was recorded.
MlpParams backward(const MlpParams& params, const Tape& tape, const Eigen::MatrixXd& upstream);

}  // namespace matchlab

#endif  // MATCHLAB_MLP_HPP_
