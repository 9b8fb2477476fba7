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

#include "matchlab/mlp.hpp"

#include <cmath>
#include <random>

#include "matchlab/error.hpp"
#include "matchlab/rng.hpp"

namespace matchlab {

std::vector<int> MlpParams::dims() const {
  std::vector<int> out;
  if (layers.empty()) return out;
  out.push_back(static_cast<int>(layers.front().weight.cols()));
  for (const auto& l : layers) out.push_back(static_cast<int>(l.weight.rows()));
  return out;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

std::string MlpParams::first_non_finite_block() const {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (!layers[k].weight.allFinite()) return "layer " + std::to_string(k) + " weight";
    if (!layers[k].bias.allFinite()) return "layer " + std::to_string(k) + " bias";
  }
  return {};
}

MlpParams MlpParams::zeros_like() const {
  MlpParams out;
  out.layers.reserve(layers.size());
  for (const auto& l : layers) {
    out.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                          Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

void MlpParams::add_scaled(const MlpParams& other, double scale) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].weight += scale * other.layers[k].weight;
    layers[k].bias += scale * other.layers[k].bias;
  }
  ++revision;
}

std::vector<double> MlpParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers) {
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) out.push_back(l.weight(i, j));
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) out.push_back(l.bias(i));
  }
  return out;
}

void MlpParams::unflatten(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) throw ContractViolation("unflatten: size mismatch");
  std::size_t p = 0;
  for (auto& l : layers) {
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) l.weight(i, j) = flat[p++];
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = flat[p++];
  }
  ++revision;
}

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw ConfigError("an MLP needs at least input and output dims");
  for (int d : dims) {
    if (d <= 0) throw ConfigError("MLP layer dims must be positive");
  }
}

}  // namespace

MlpParams zero_params(const std::vector<int>& dims) {
  check_dims(dims);
  MlpParams p;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    p.layers.push_back({Eigen::MatrixXd::Zero(dims[k + 1], dims[k]), Eigen::VectorXd::Zero(dims[k + 1])});
  }
  return p;
}

MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed) {
  MlpParams p = zero_params(dims);
  Rng rng = make_rng(seed, {kStreamInit});
  for (auto& l : p.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.weight.rows() + l.weight.cols()));
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weight.cols(); ++j) {
        l.weight(i, j) = -limit + 2.0 * limit * uniform01(rng);
      }
    }
  }
  return p;
}

Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& x, Tape* tape) {
  if (params.layers.empty()) throw ContractViolation("forward: empty network");
  if (x.cols() != params.input_dim()) {
    throw ContractViolation("forward: input width " + std::to_string(x.cols()) + " != " +
                            std::to_string(params.input_dim()));
  }
  if (tape) {
    tape->inputs.clear();
    tape->params = &params;
    tape->revision = params.revision;
  }
  Eigen::MatrixXd h = x;
  const std::size_t last = params.layers.size() - 1;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const DenseLayer& l = params.layers[k];
    Eigen::MatrixXd z = h * l.weight.transpose();
    z.rowwise() += l.bias.transpose();
    if (k != last) z = z.cwiseMax(0.0);
    if (tape) tape->inputs.push_back(std::move(h));
    h = std::move(z);
  }
  return h;
}

MlpParams backward(const MlpParams& params, const Tape& tape, const Eigen::MatrixXd& upstream) {
  if (tape.params != &params || tape.revision != params.revision ||
      tape.inputs.size() != params.layers.size()) {
    throw ContractViolation("backward: stale tape");
  }
  if (upstream.rows() != tape.inputs.front().rows() || upstream.cols() != params.output_dim()) {
    throw ContractViolation("backward: upstream gradient shape mismatch");
  }
  MlpParams grads;
  grads.layers.resize(params.layers.size());
  Eigen::MatrixXd dz = upstream;
  for (std::size_t k = params.layers.size(); k-- > 0;) {
    const Eigen::MatrixXd& in = tape.inputs[k];
    grads.layers[k].weight = dz.transpose() * in;
    grads.layers[k].bias = dz.colwise().sum().transpose();
    if (k == 0) break;
    Eigen::MatrixXd dh = dz * params.layers[k].weight;
    // `in` is the previous layer's ReLU output; zero exactly where it was cut.
    dz = (in.array() > 0.0).select(dh, 0.0);
  }
  return grads;
}

}  // namespace matchlab
