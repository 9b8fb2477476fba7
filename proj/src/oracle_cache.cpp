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

#include "matchlab/oracle_cache.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "matchlab/env.hpp"
#include "matchlab/error.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

using nlohmann::json;

std::string encode_oracle_line(std::size_t index, const OracleResult& r) {
  json assignment = json::array();
  for (const auto& d : r.assignment) assignment.push_back(d ? json(*d) : json(nullptr));
  json j = {
      {"index", index},
      {"status", to_string(r.status)},
      {"opt", r.opt},
      {"upper_bound", r.upper_bound},
      {"assignment", assignment},
      {"nodes", r.nodes_explored},
      {"root_bound", r.root_bound},
  };
  if (!r.refusal.empty()) j["refusal"] = r.refusal;
  return j.dump();
}

OracleResult decode_oracle_line(const std::string& line, std::size_t* index) {
  try {
    const json j = json::parse(line);
    OracleResult r;
    *index = j.at("index").get<std::size_t>();
    const auto status = j.at("status").get<std::string>();
    if (status == "ok") {
      r.status = OracleStatus::kOptimal;
    } else if (status == "refused") {
      r.status = OracleStatus::kRefused;
    } else {
      throw DataError("unknown status '" + status + "'");
    }
    r.opt = j.at("opt").get<double>();
    r.upper_bound = j.at("upper_bound").get<double>();
    for (const auto& d : j.at("assignment")) {
      r.assignment.push_back(d.is_null() ? std::nullopt : std::optional<int>(d.get<int>()));
    }
    r.nodes_explored = j.at("nodes").get<std::int64_t>();
    r.root_bound = j.at("root_bound").get<double>();
    if (j.contains("refusal")) r.refusal = j.at("refusal").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("oracle cache line: ") + e.what());
  }
}

std::filesystem::path oracle_cache_path(const std::filesystem::path& root,
                                        const std::string& dataset_hash) {
  return root / (dataset_hash + ".oracle.jsonl");
}

std::filesystem::path oracle_cache_root(const std::filesystem::path& fallback) {
  const char* env = std::getenv("MATCHLAB_CACHE");
  if (env != nullptr && *env != '\0') return std::filesystem::path(env);
  return fallback;
}

namespace {

constexpr std::size_t kChunk = 256;

// Checks a cached entry against the instance it claims to describe.
bool consistent(const BipartiteInstance& inst, const OracleResult& r) {
  if (!r.optimal()) return r.assignment.empty() && std::isfinite(r.upper_bound);
  if (static_cast<int>(r.assignment.size()) != inst.horizon()) return false;
  try {
    return std::abs(recompute_objective(inst, r.assignment) - r.opt) <= 1e-9 * std::max(1.0, std::abs(r.opt));
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::optional<OracleResult>> read_cache(const std::filesystem::path& path,
                                                    const Dataset& dataset) {
  std::vector<std::optional<OracleResult>> out(dataset.size());
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t index = 0;
    OracleResult r = decode_oracle_line(line, &index);
    if (index >= dataset.size() || out[index].has_value()) {
      throw DataError("oracle cache index " + std::to_string(index) + " out of range or duplicated");
    }
    if (!consistent(dataset[index], r)) {
      throw DataError("oracle cache entry " + std::to_string(index) + " does not match the dataset");
    }
    out[index] = std::move(r);
  }
  return out;
}

void write_cache(const std::filesystem::path& path,
                 const std::vector<std::optional<OracleResult>>& entries) {
  std::string body;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i]) body += encode_oracle_line(i, *entries[i]) + "\n";
  }
  write_file_atomic(path, body);
}

std::filesystem::path quarantine(const std::filesystem::path& path) {
  for (int k = 0;; ++k) {
    auto target = path;
    target += k == 0 ? ".corrupt" : ".corrupt." + std::to_string(k);
    if (!std::filesystem::exists(target)) {
      std::filesystem::rename(path, target);
      return target;
    }
  }
}

}  // namespace

std::vector<OracleResult> load_or_solve(const Dataset& dataset, const std::string& dataset_hash,
                                        const std::filesystem::path& root,
                                        const OsbmLimits& limits, CacheReport* report) {
  CacheReport local;
  CacheReport& rep = report != nullptr ? *report : local;
  rep = {};
  std::filesystem::create_directories(root);
  const auto path = oracle_cache_path(root, dataset_hash);
  std::vector<std::optional<OracleResult>> entries(dataset.size());
  if (std::filesystem::exists(path)) {
    try {
      entries = read_cache(path, dataset);
    } catch (const DataError&) {
      rep.quarantined = quarantine(path);
      entries.assign(dataset.size(), std::nullopt);
    }
  }
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i]) {
      ++rep.reused;
    } else {
      missing.push_back(i);
    }
  }
  for (std::size_t start = 0; start < missing.size(); start += kChunk) {
    const std::size_t end = std::min(missing.size(), start + kChunk);
    Dataset chunk;
    for (std::size_t k = start; k < end; ++k) chunk.push_back(dataset[missing[k]]);
    auto solved = solve_dataset(chunk, limits);
    for (std::size_t k = start; k < end; ++k) entries[missing[k]] = std::move(solved[k - start]);
    rep.solved += end - start;
    write_cache(path, entries);
  }
  if (missing.empty() && !std::filesystem::exists(path)) write_cache(path, entries);
  std::vector<OracleResult> out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!e->optimal()) ++rep.refused;
    out.push_back(std::move(*e));
  }
  return out;
}

}  // namespace matchlab
