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

#ifndef MATCHLAB_TEXT_FORMAT_HPP_
#define MATCHLAB_TEXT_FORMAT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace matchlab {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_double(double x);

// FNV-1a 64-bit, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string hash_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never see a
// half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace matchlab

#endif  // MATCHLAB_TEXT_FORMAT_HPP_
