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

#ifndef MATCHLAB_INSTANCE_HPP_
#define MATCHLAB_INSTANCE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace matchlab {

// One weighted edge from the arriving node to fixed node `u`.
struct Edge {
  int u = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// An online node: its edges (sorted by u, no duplicates) and, for OSBM, the
// user it belongs to. Several arrivals may share a user.
struct Arrival {
  std::vector<Edge> edges;
  std::optional<int> user;

  const Edge* find(int u) const;
  friend bool operator==(const Arrival&, const Arrival&) = default;
};

enum class ProblemKind { kEobm, kOsbm, kAdwords };

const char* to_string(ProblemKind kind);

struct EobmPayload {
  friend bool operator==(const EobmPayload&, const EobmPayload&) = default;
};

// Weighted-coverage data: genre set A_u per fixed node and a rating vector
// per user.
struct OsbmPayload {
  int genre_count = 0;
  std::vector<std::vector<int>> genres_per_u;
  std::vector<std::vector<double>> user_weights;

  friend bool operator==(const OsbmPayload&, const OsbmPayload&) = default;
};

struct AdwordsPayload {
  std::vector<double> budgets;

  friend bool operator==(const AdwordsPayload&, const AdwordsPayload&) = default;
};

using Payload = std::variant<EobmPayload, OsbmPayload, AdwordsPayload>;

ProblemKind payload_kind(const Payload& payload);

struct InstanceMeta {
  std::string generator;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

// A sampled problem instance. Immutable once built; the arrival order is part
// of the instance.
class BipartiteInstance {
 public:
  BipartiteInstance() = default;
  BipartiteInstance(int u_count, std::vector<Arrival> arrivals, Payload payload,
                    InstanceMeta meta = {});

  int u_count() const { return u_count_; }
  int horizon() const { return static_cast<int>(arrivals_.size()); }
  const std::vector<Arrival>& arrivals() const { return arrivals_; }
  const Arrival& arrival(int t) const { return arrivals_[static_cast<std::size_t>(t)]; }
  const Payload& payload() const { return payload_; }
  ProblemKind kind() const { return payload_kind(payload_); }
  const InstanceMeta& meta() const { return meta_; }

  const OsbmPayload& osbm() const { return std::get<OsbmPayload>(payload_); }
  const AdwordsPayload& adwords() const { return std::get<AdwordsPayload>(payload_); }

  friend bool operator==(const BipartiteInstance&, const BipartiteInstance&) = default;

 private:
  int u_count_ = 0;
  std::vector<Arrival> arrivals_;
  Payload payload_;
  InstanceMeta meta_;
};

using Dataset = std::vector<BipartiteInstance>;

// Per-timestep decision of a finished episode: Match(u) or Skip (nullopt).
struct Solution {
  std::vector<std::optional<int>> decisions;
  double objective_value = 0.0;
};

struct Violation {
  std::string location;
  std::string message;
};

// Every violated invariant, with its location. Empty means valid.
std::vector<Violation> validate(const BipartiteInstance& instance);

// Relabels fixed nodes: old node u becomes perm[u]. Payload rows move along.
BipartiteInstance permute_fixed_nodes(const BipartiteInstance& instance,
                                      const std::vector<int>& perm);

// Weighted coverage of user `user` by the union of the genre sets of `movies`.
double coverage_value(const OsbmPayload& payload, int user,
                      const std::vector<int>& movies);

}  // namespace matchlab

#endif  // MATCHLAB_INSTANCE_HPP_
