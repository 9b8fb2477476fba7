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

#include "matchlab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "matchlab/error.hpp"

namespace matchlab {

const Edge* Arrival::find(int u) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), u,
                             [](const Edge& e, int key) { return e.u < key; });
  if (it == edges.end() || it->u != u) return nullptr;
  return &*it;
}

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kEobm:
      return "eobm";
    case ProblemKind::kOsbm:
      return "osbm";
    case ProblemKind::kAdwords:
      return "adwords";
  }
  return "?";
}

ProblemKind payload_kind(const Payload& payload) {
  switch (payload.index()) {
    case 0:
      return ProblemKind::kEobm;
    case 1:
      return ProblemKind::kOsbm;
    default:
      return ProblemKind::kAdwords;
  }
}

BipartiteInstance::BipartiteInstance(int u_count, std::vector<Arrival> arrivals,
                                     Payload payload, InstanceMeta meta)
    : u_count_(u_count),
      arrivals_(std::move(arrivals)),
      payload_(std::move(payload)),
      meta_(std::move(meta)) {}

namespace {

std::string arrival_loc(std::size_t t) { return "arrivals[" + std::to_string(t) + "]"; }

}  // namespace

std::vector<Violation> validate(const BipartiteInstance& instance) {
  std::vector<Violation> out;
  const int n = instance.u_count();
  if (n <= 0) out.push_back({"u_count", "must be positive"});

  const auto& arrivals = instance.arrivals();
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    const Arrival& a = arrivals[t];
    if (a.edges.empty()) out.push_back({arrival_loc(t), "arrival has no edges"});
    for (std::size_t k = 0; k < a.edges.size(); ++k) {
      const Edge& e = a.edges[k];
      const std::string loc = arrival_loc(t) + ".edges[" + std::to_string(k) + "]";
      if (e.u < 0 || e.u >= n) {
        out.push_back({loc, "fixed node " + std::to_string(e.u) + " out of range [0, " +
                                std::to_string(n) + ")"});
      }
      if (!std::isfinite(e.w) || e.w <= 0.0) {
        out.push_back({loc, "weight must be positive and finite"});
      }
      if (k > 0) {
        const int prev = a.edges[k - 1].u;
        if (prev == e.u) {
          out.push_back({loc, "duplicate edge to fixed node " + std::to_string(e.u)});
        } else if (prev > e.u) {
          out.push_back({loc, "edges not sorted by fixed node"});
        }
      }
    }
  }

  switch (instance.kind()) {
    case ProblemKind::kEobm:
      for (std::size_t t = 0; t < arrivals.size(); ++t) {
        if (arrivals[t].user) out.push_back({arrival_loc(t) + ".user", "user id on E-OBM arrival"});
      }
      break;
    case ProblemKind::kOsbm: {
      const OsbmPayload& p = instance.osbm();
      if (p.genre_count <= 0) out.push_back({"payload.genre_count", "must be positive"});
      if (static_cast<int>(p.genres_per_u.size()) != n) {
        out.push_back({"payload.genres_per_u", "expected one genre set per fixed node"});
      }
      for (std::size_t u = 0; u < p.genres_per_u.size(); ++u) {
        const auto& genres = p.genres_per_u[u];
        const std::string loc = "payload.genres_per_u[" + std::to_string(u) + "]";
        if (genres.empty()) out.push_back({loc, "empty genre set"});
        for (std::size_t k = 0; k < genres.size(); ++k) {
          if (genres[k] < 0 || genres[k] >= p.genre_count) {
            out.push_back({loc, "genre " + std::to_string(genres[k]) + " out of range"});
          }
          if (k > 0 && genres[k - 1] >= genres[k]) {
            out.push_back({loc, "genres not strictly increasing"});
          }
        }
      }
      for (std::size_t l = 0; l < p.user_weights.size(); ++l) {
        const auto& w = p.user_weights[l];
        const std::string loc = "payload.user_weights[" + std::to_string(l) + "]";
        if (static_cast<int>(w.size()) != p.genre_count) {
          out.push_back({loc, "expected genre_count entries"});
        }
        for (double x : w) {
          if (!std::isfinite(x) || x < 0.0) {
            out.push_back({loc, "ratings must be finite and non-negative"});
            break;
          }
        }
      }
      for (std::size_t t = 0; t < arrivals.size(); ++t) {
        const auto& user = arrivals[t].user;
        if (!user) {
          out.push_back({arrival_loc(t) + ".user", "OSBM arrival without user id"});
        } else if (*user < 0 || *user >= static_cast<int>(p.user_weights.size())) {
          out.push_back({arrival_loc(t) + ".user",
                         "unknown user id " + std::to_string(*user)});
        }
      }
      break;
    }
    case ProblemKind::kAdwords: {
      const AdwordsPayload& p = instance.adwords();
      if (static_cast<int>(p.budgets.size()) != n) {
        out.push_back({"payload.budgets", "expected one budget per fixed node"});
      }
      for (std::size_t u = 0; u < p.budgets.size(); ++u) {
        if (!std::isfinite(p.budgets[u]) || p.budgets[u] <= 0.0) {
          out.push_back({"payload.budgets[" + std::to_string(u) + "]", "budget must be positive"});
        }
      }
      for (std::size_t t = 0; t < arrivals.size(); ++t) {
        if (arrivals[t].user) out.push_back({arrival_loc(t) + ".user", "user id on Adwords arrival"});
      }
      break;
    }
  }
  return out;
}

BipartiteInstance permute_fixed_nodes(const BipartiteInstance& instance,
                                      const std::vector<int>& perm) {
  const int n = instance.u_count();
  if (static_cast<int>(perm.size()) != n) {
    throw ContractViolation("permutation size does not match u_count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw ContractViolation("not a permutation of the fixed nodes");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }

  std::vector<Arrival> arrivals = instance.arrivals();
  for (Arrival& a : arrivals) {
    for (Edge& e : a.edges) e.u = perm[static_cast<std::size_t>(e.u)];
    std::sort(a.edges.begin(), a.edges.end(),
              [](const Edge& x, const Edge& y) { return x.u < y.u; });
  }

  Payload payload = instance.payload();
  if (auto* osbm = std::get_if<OsbmPayload>(&payload)) {
    auto genres = osbm->genres_per_u;
    for (int u = 0; u < n; ++u) {
      osbm->genres_per_u[static_cast<std::size_t>(perm[static_cast<std::size_t>(u)])] =
          genres[static_cast<std::size_t>(u)];
    }
  } else if (auto* ad = std::get_if<AdwordsPayload>(&payload)) {
    auto budgets = ad->budgets;
    for (int u = 0; u < n; ++u) {
      ad->budgets[static_cast<std::size_t>(perm[static_cast<std::size_t>(u)])] =
          budgets[static_cast<std::size_t>(u)];
    }
  }
  return BipartiteInstance(n, std::move(arrivals), std::move(payload), instance.meta());
}

double coverage_value(const OsbmPayload& payload, int user, const std::vector<int>& movies) {
  std::vector<bool> covered(static_cast<std::size_t>(payload.genre_count), false);
  for (int m : movies) {
    for (int z : payload.genres_per_u[static_cast<std::size_t>(m)]) {
      covered[static_cast<std::size_t>(z)] = true;
    }
  }
  const auto& w = payload.user_weights[static_cast<std::size_t>(user)];
  double total = 0.0;
  for (int z = 0; z < payload.genre_count; ++z) {
    if (covered[static_cast<std::size_t>(z)]) total += w[static_cast<std::size_t>(z)];
  }
  return total;
}

}  // namespace matchlab
