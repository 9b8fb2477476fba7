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

#ifndef MATCHLAB_ERROR_HPP_
#define MATCHLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace matchlab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: dataset lines, CSV rows, checkpoint contents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad user-supplied parameters (generator specs, configs, limits).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation precondition, e.g. stepping with an illegal
// action.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An exact oracle declined to run (size limits, unsupported payload).
class OracleRefused : public Error {
 public:
  using Error::Error;
};

// Training data inconsistent with the environment (e.g. an illegal target).
class DataError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace matchlab

#endif  // MATCHLAB_ERROR_HPP_
