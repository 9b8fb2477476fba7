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

#ifndef MATCHLAB_ORACLE_CACHE_HPP_
#define MATCHLAB_ORACLE_CACHE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/oracle.hpp"

namespace matchlab {

// One JSON object per line, keyed by instance index:
// {"index":i,"status":"ok"|"refused","opt":x,"upper_bound":x,
//  "assignment":[u|null,...],"nodes":n,"root_bound":x,"refusal":"..."}
std::string encode_oracle_line(std::size_t index, const OracleResult& r);
OracleResult decode_oracle_line(const std::string& line, std::size_t* index);

std::filesystem::path oracle_cache_path(const std::filesystem::path& root,
                                        const std::string& dataset_hash);

// Root from MATCHLAB_CACHE, else `fallback`.
std::filesystem::path oracle_cache_root(const std::filesystem::path& fallback);

struct CacheReport {
  std::size_t reused = 0;
  std::size_t solved = 0;
  std::size_t refused = 0;
  // Set when an unreadable cache was moved aside.
  std::optional<std::filesystem::path> quarantined;
};

// Loads whatever the cache holds for this dataset, solves the rest in chunks
// (rewriting the file after each chunk so an interrupted run resumes), and
// returns one result per instance. A cache that fails to parse or disagrees
// with the dataset is renamed with a ".corrupt" suffix and rebuilt.
std::vector<OracleResult> load_or_solve(const Dataset& dataset, const std::string& dataset_hash,
                                        const std::filesystem::path& root,
                                        const OsbmLimits& limits = {},
                                        CacheReport* report = nullptr);

}  // namespace matchlab

#endif  // MATCHLAB_ORACLE_CACHE_HPP_
