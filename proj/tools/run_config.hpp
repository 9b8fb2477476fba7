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

#ifndef MATCHLAB_TOOLS_RUN_CONFIG_HPP_
#define MATCHLAB_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace matchlab::cli {

using Json = nlohmann::ordered_json;

// Effective configuration for one command: the file's global keys and the
// command's own section, with flags applied on top.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 0;
  std::filesystem::path out;
  Json section = Json::object();
  std::map<std::string, std::string> input_hashes;

  // Typed accessors over `section`; all throw ConfigError on type mismatch.
  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& fallback) const;
  int int_or(const std::string& key, int fallback) const;
  double num_or(const std::string& key, double fallback) const;
  std::filesystem::path path(const std::string& key) const;

  // Reads a file named by `key`, remembering its hash for the manifest.
  std::filesystem::path input(const std::string& key);
  void record_input(const std::filesystem::path& p);
};

struct FlagOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
};

// Comments (// and /* */) are allowed in config files.
RunConfig load_run_config(const std::string& command, const FlagOverrides& flags);

std::string version_string();

// <out>/<command>.manifest.json: command, version, seed, effective config,
// input hashes and the primary outputs with their hashes.
void write_manifest(const RunConfig& cfg, const std::map<std::string, std::string>& outputs);

}  // namespace matchlab::cli

#endif  // MATCHLAB_TOOLS_RUN_CONFIG_HPP_
