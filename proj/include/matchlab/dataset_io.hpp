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

#ifndef MATCHLAB_DATASET_IO_HPP_
#define MATCHLAB_DATASET_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "matchlab/instance.hpp"

namespace matchlab {

// One JSON object per line:
//   {"u_count":N,"arrivals":[{"edges":[[u,w],...],"user":l},...],
//    "payload":{"kind":"eobm"|"osbm"|"adwords",...},"meta":{...}}
// Weights are written with 17 significant digits.
std::string encode_instance(const BipartiteInstance& instance);

// Parses and validates one line. `line_no` is 1-based and only used in
// error messages.
BipartiteInstance decode_instance(std::string_view line, int line_no = 1);

// All instances must share u_count, horizon and payload kind.
void write_dataset(const Dataset& instances, const std::filesystem::path& path);
std::string encode_dataset(const Dataset& instances);

Dataset read_dataset(const std::filesystem::path& path);
Dataset decode_dataset(std::string_view text);

}  // namespace matchlab

#endif  // MATCHLAB_DATASET_IO_HPP_
