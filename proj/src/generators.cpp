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

#include "matchlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "matchlab/error.hpp"
#include "matchlab/parallel.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::kEr:
      return "er";
    case GenKind::kBa:
      return "ba";
    case GenKind::kBaseGraph:
      return "base_graph";
    case GenKind::kAdwordsTemplate:
      return "adwords_template";
  }
  return "?";
}

GenKind parse_gen_kind(const std::string& name) {
  if (name == "er") return GenKind::kEr;
  if (name == "ba") return GenKind::kBa;
  if (name == "base_graph") return GenKind::kBaseGraph;
  if (name == "adwords_template") return GenKind::kAdwordsTemplate;
  throw ConfigError("unknown generator kind '" + name + "'");
}

void check_spec(const GenSpec& spec) {
  if (spec.count < 1) throw ConfigError("count must be >= 1");
  if (spec.kind == GenKind::kEr || spec.kind == GenKind::kBa || spec.kind == GenKind::kBaseGraph) {
    if (spec.u_count < 1 || spec.v_count < 1) throw ConfigError("u_count and v_count must be >= 1");
  }
  if (spec.kind == GenKind::kEr && !(spec.p > 0.0 && spec.p <= 1.0)) {
    throw ConfigError("er: p must lie in (0, 1], got " + format_double(spec.p));
  }
  if (spec.kind == GenKind::kBa && !(spec.p > 0.0 && spec.p < spec.u_count)) {
    throw ConfigError("ba: p must lie in (0, u_count), got " + format_double(spec.p));
  }
  if (spec.kind == GenKind::kAdwordsTemplate && !(spec.bid_lo > 0.0 && spec.bid_lo < spec.bid_hi)) {
    throw ConfigError("adwords: need 0 < bid_lo < bid_hi");
  }
}

namespace {

InstanceMeta make_meta(const GenSpec& spec) {
  InstanceMeta meta;
  meta.generator = to_string(spec.kind);
  meta.seed = spec.seed;
  if (spec.kind == GenKind::kEr || spec.kind == GenKind::kBa) meta.params["p"] = format_double(spec.p);
  if (spec.kind == GenKind::kBaseGraph) {
    meta.params["fixed_nodes"] = spec.mode == FixedNodeMode::kFixed ? "fixed" : "var";
  }
  return meta;
}

}  // namespace

BipartiteInstance gen_er(const GenSpec& spec, Rng& rng) {
  std::vector<Arrival> arrivals(static_cast<std::size_t>(spec.v_count));
  for (Arrival& a : arrivals) {
    int attempts = 0;
    do {
      if (++attempts > kMaxRedraws) {
        throw Error("er: arrival without edges after " + std::to_string(kMaxRedraws) +
                    " redraws (seed " + std::to_string(spec.seed) + ")");
      }
      a.edges.clear();
      for (int u = 0; u < spec.u_count; ++u) {
        if (uniform01(rng) < spec.p) a.edges.push_back({u, uniform_open_closed(rng)});
      }
    } while (a.edges.empty());
  }
  return BipartiteInstance(spec.u_count, std::move(arrivals), EobmPayload{}, make_meta(spec));
}

std::vector<double> ba_attachment_distribution(const std::vector<int>& degrees) {
  double total = static_cast<double>(degrees.size());
  for (int d : degrees) total += d;
  std::vector<double> mu(degrees.size());
  for (std::size_t u = 0; u < degrees.size(); ++u) mu[u] = (1.0 + degrees[u]) / total;
  return mu;
}

BipartiteInstance gen_ba(const GenSpec& spec, Rng& rng) {
  const int n = spec.u_count;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::binomial_distribution<int> neighbours(n, spec.p / n);
  const double sigma = spec.p / 5.0;
  std::vector<Arrival> arrivals(static_cast<std::size_t>(spec.v_count));
  std::vector<char> chosen(static_cast<std::size_t>(n));
  for (Arrival& a : arrivals) {
    int n_v = 0;
    for (int attempts = 0; n_v == 0; ++attempts) {
      if (attempts >= kMaxRedraws) {
        throw Error("ba: zero-degree arrival after " + std::to_string(kMaxRedraws) +
                    " redraws (seed " + std::to_string(spec.seed) + ")");
      }
      n_v = neighbours(rng);
    }
    // Attachment weights are fixed for the duration of one arrival.
    std::vector<double> mu = ba_attachment_distribution(degree);
    std::discrete_distribution<int> pick(mu.begin(), mu.end());
    std::fill(chosen.begin(), chosen.end(), 0);
    for (int selected = 0; selected < n_v;) {
      const int u = pick(rng);
      if (chosen[static_cast<std::size_t>(u)]) continue;
      chosen[static_cast<std::size_t>(u)] = 1;
      std::normal_distribution<double> weight(degree[static_cast<std::size_t>(u)], sigma);
      a.edges.push_back({u, std::max(weight(rng), 1e-6)});
      ++selected;
    }
    for (const Edge& e : a.edges) ++degree[static_cast<std::size_t>(e.u)];
    std::sort(a.edges.begin(), a.edges.end(), [](const Edge& x, const Edge& y) { return x.u < y.u; });
  }
  return BipartiteInstance(n, std::move(arrivals), EobmPayload{}, make_meta(spec));
}

std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

BipartiteInstance gen_from_base_instance(const GenSpec& spec, const BaseGraph& base,
                                         const std::vector<int>& fixed_nodes, Rng& rng) {
  const int k = static_cast<int>(fixed_nodes.size());
  std::vector<int> local(static_cast<std::size_t>(base.left_count()), -1);
  for (int j = 0; j < k; ++j) local[static_cast<std::size_t>(fixed_nodes[static_cast<std::size_t>(j)])] = j;

  auto edges_of = [&](int r) {
    std::vector<Edge> out;
    for (const Edge& e : base.right_adjacency(r)) {
      const int j = local[static_cast<std::size_t>(e.u)];
      if (j >= 0) out.push_back({j, e.w});
    }
    std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) { return x.u < y.u; });
    return out;
  };

  bool any = false;
  for (int r = 0; r < base.right_count() && !any; ++r) {
    for (const Edge& e : base.right_adjacency(r)) {
      if (local[static_cast<std::size_t>(e.u)] >= 0) {
        any = true;
        break;
      }
    }
  }
  if (!any) {
    throw Error("base_graph: no right node neighbours the sampled fixed nodes (seed " +
                std::to_string(spec.seed) + ")");
  }

  std::uniform_int_distribution<int> pick_right(0, base.right_count() - 1);
  std::vector<Arrival> arrivals;
  std::vector<int> right_ids;
  arrivals.reserve(static_cast<std::size_t>(spec.v_count));
  for (int j = 0; j < spec.v_count; ++j) {
    int attempts = 0;
    while (true) {
      if (++attempts > kMaxRedraws) {
        throw Error("base_graph: arrival re-sampling exceeded " + std::to_string(kMaxRedraws) +
                    " attempts (seed " + std::to_string(spec.seed) + ")");
      }
      const int r = pick_right(rng);
      auto edges = edges_of(r);
      if (edges.empty()) continue;
      arrivals.push_back(Arrival{std::move(edges), std::nullopt});
      right_ids.push_back(r);
      break;
    }
  }

  InstanceMeta meta = make_meta(spec);
  if (!base.has_osbm()) {
    return BipartiteInstance(k, std::move(arrivals), EobmPayload{}, std::move(meta));
  }

  OsbmPayload payload;
  payload.genre_count = base.genre_count();
  for (int left : fixed_nodes) payload.genres_per_u.push_back(base.left_genres(left));
  std::map<int, int> user_ids;
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    const int r = right_ids[t];
    auto [it, inserted] = user_ids.try_emplace(r, static_cast<int>(payload.user_weights.size()));
    if (inserted) payload.user_weights.push_back(base.right_ratings(r));
    arrivals[t].user = it->second;
  }
  return BipartiteInstance(k, std::move(arrivals), std::move(payload), std::move(meta));
}

namespace {

std::vector<int> fixed_sample(const GenSpec& spec, const BaseGraph& base) {
  Rng rng = make_rng(spec.seed, {kStreamFixedNodes});
  return sample_without_replacement(base.left_count(), spec.u_count, rng);
}

void check_base(const GenSpec& spec, const BaseGraph& base) {
  if (spec.u_count > base.left_count()) {
    throw ConfigError("base_graph: K = " + std::to_string(spec.u_count) + " exceeds the " +
                      std::to_string(base.left_count()) + " left nodes of the base graph");
  }
}

BipartiteInstance generate_one(const GenSpec& spec, const BaseGraph* base,
                               const std::vector<int>& fixed, int index) {
  Rng rng = make_rng(spec.seed, {kStreamInstance, static_cast<std::uint64_t>(index)});
  switch (spec.kind) {
    case GenKind::kEr:
      return gen_er(spec, rng);
    case GenKind::kBa:
      return gen_ba(spec, rng);
    case GenKind::kBaseGraph:
      if (spec.mode == FixedNodeMode::kVar) {
        auto sample = sample_without_replacement(base->left_count(), spec.u_count, rng);
        return gen_from_base_instance(spec, *base, sample, rng);
      }
      return gen_from_base_instance(spec, *base, fixed, rng);
    case GenKind::kAdwordsTemplate:
      return gen_adwords(spec, *base, rng);
  }
  throw ConfigError("unknown generator kind");
}

std::vector<int> prepare(const GenSpec& spec, const BaseGraph* base) {
  check_spec(spec);
  if (spec.kind == GenKind::kBaseGraph || spec.kind == GenKind::kAdwordsTemplate) {
    if (base == nullptr) throw ConfigError(std::string(to_string(spec.kind)) + " needs a base graph");
  }
  if (spec.kind == GenKind::kBaseGraph) {
    check_base(spec, *base);
    if (spec.mode == FixedNodeMode::kFixed) return fixed_sample(spec, *base);
  }
  return {};
}

}  // namespace

Dataset gen_from_base(const GenSpec& spec, const BaseGraph& base) {
  GenSpec s = spec;
  s.kind = GenKind::kBaseGraph;
  return generate_dataset(s, &base);
}

BipartiteInstance gen_adwords(const GenSpec& spec, const BaseGraph& tmpl, Rng& rng) {
  const int n = tmpl.left_count();
  const int horizon = tmpl.right_count();
  for (int r = 0; r < horizon; ++r) {
    if (tmpl.right_adjacency(r).empty()) {
      throw ValidationError("adwords template: arrival " + std::to_string(r) + " has no edges");
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) perm[static_cast<std::size_t>(u)] = u;
  std::shuffle(perm.begin(), perm.end(), rng);
  const double bid = spec.bid_lo + (spec.bid_hi - spec.bid_lo) * uniform01(rng);

  std::vector<Arrival> arrivals(static_cast<std::size_t>(horizon));
  for (int r = 0; r < horizon; ++r) {
    auto& edges = arrivals[static_cast<std::size_t>(r)].edges;
    for (const Edge& e : tmpl.right_adjacency(r)) edges.push_back({perm[static_cast<std::size_t>(e.u)], bid});
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.u < y.u; });
  }
  AdwordsPayload payload;
  payload.budgets.assign(static_cast<std::size_t>(n), bid * horizon / n);
  InstanceMeta meta = make_meta(spec);
  meta.params["bid"] = format_double(bid);
  return BipartiteInstance(n, std::move(arrivals), std::move(payload), std::move(meta));
}

Dataset generate_dataset_serial(const GenSpec& spec, const BaseGraph* base) {
  const auto fixed = prepare(spec, base);
  Dataset out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) out.push_back(generate_one(spec, base, fixed, i));
  return out;
}

Dataset generate_dataset(const GenSpec& spec, const BaseGraph* base) {
  const auto fixed = prepare(spec, base);
  Dataset out(static_cast<std::size_t>(spec.count));
  parallel_for(spec.count, [&](int i) {
    out[static_cast<std::size_t>(i)] = generate_one(spec, base, fixed, i);
  });
  return out;
}

}  // namespace matchlab
