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

#include "run_config.hpp"

#include "matchlab/error.hpp"
#include "matchlab/text_format.hpp"

#ifndef MATCHLAB_VERSION
#define MATCHLAB_VERSION "0.1.0-unknown"
#endif

namespace matchlab::cli {

namespace {

const Json& lookup(const Json& section, const std::string& key) {
  auto it = section.find(key);
  if (it == section.end()) throw ConfigError("missing config key '" + key + "'");
  return *it;
}

template <typename T>
T typed(const Json& section, const std::string& key) {
  try {
    return lookup(section, key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

bool RunConfig::has(const std::string& key) const { return section.contains(key); }

std::string RunConfig::str(const std::string& key) const { return typed<std::string>(section, key); }

std::string RunConfig::str_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

int RunConfig::int_or(const std::string& key, int fallback) const {
  return has(key) ? typed<int>(section, key) : fallback;
}

double RunConfig::num_or(const std::string& key, double fallback) const {
  return has(key) ? typed<double>(section, key) : fallback;
}

std::filesystem::path RunConfig::path(const std::string& key) const { return std::filesystem::path(str(key)); }

void RunConfig::record_input(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw ConfigError("input file not found: " + p.string());
  input_hashes[p.generic_string()] = hash_file(p);
}

std::filesystem::path RunConfig::input(const std::string& key) {
  auto p = path(key);
  record_input(p);
  return p;
}

RunConfig load_run_config(const std::string& command, const FlagOverrides& flags) {
  Json file = Json::object();
  if (flags.config) {
    std::string text;
    try {
      text = read_file(*flags.config);
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
    try {
      file = Json::parse(text, nullptr, true, true);
    } catch (const Json::parse_error& e) {
      throw ConfigError(flags.config->string() + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError(flags.config->string() + ": top level must be an object");
  }
  RunConfig cfg;
  cfg.command = command;
  if (file.contains(command)) {
    cfg.section = file.at(command);
    if (!cfg.section.is_object()) throw ConfigError("section '" + command + "' must be an object");
  }
  if (flags.seed) {
    cfg.seed = *flags.seed;
  } else if (file.contains("seed")) {
    try {
      cfg.seed = file.at("seed").get<std::uint64_t>();
    } catch (const Json::exception&) {
      throw ConfigError("seed must be a non-negative integer");
    }
  } else {
    throw ConfigError("a seed is required (config key 'seed' or --seed)");
  }
  if (flags.workers) {
    cfg.workers = *flags.workers;
  } else if (file.contains("workers")) {
    cfg.workers = file.at("workers").get<int>();
  }
  if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
  if (flags.out) {
    cfg.out = *flags.out;
  } else if (file.contains("out")) {
    cfg.out = file.at("out").get<std::string>();
  } else {
    cfg.out = "out";
  }
  if (flags.config) cfg.record_input(*flags.config);
  return cfg;
}

std::string version_string() { return MATCHLAB_VERSION; }

void write_manifest(const RunConfig& cfg, const std::map<std::string, std::string>& outputs) {
  Json inputs = Json::object();
  for (const auto& [p, h] : cfg.input_hashes) inputs[p] = h;
  Json outs = Json::object();
  for (const auto& [p, h] : outputs) outs[p] = h;
  Json m = {
      {"command", cfg.command},
      {"version", version_string()},
      {"seed", cfg.seed},
      {"config", cfg.section},
      {"inputs", inputs},
      {"outputs", outs},
  };
  std::filesystem::create_directories(cfg.out);
  write_file_atomic(cfg.out / (cfg.command + ".manifest.json"), m.dump(2) + "\n");
}

}  // namespace matchlab::cli
