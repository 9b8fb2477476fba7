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

#ifndef MATCHLAB_BASE_GRAPH_HPP_
#define MATCHLAB_BASE_GRAPH_HPP_

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "matchlab/instance.hpp"

namespace matchlab {

struct BaseEdge {
  int left = 0;
  int right = 0;
  double w = 0.0;
};

// A bipartite base graph from which instances are sampled: left nodes become
// fixed nodes, right nodes become arrivals. Optional OSBM annotations give a
// genre set per left node and a genre-rating vector per right node (user).
class BaseGraph {
 public:
  BaseGraph() = default;
  BaseGraph(int left_count, int right_count, std::vector<BaseEdge> edges);

  int left_count() const { return left_count_; }
  int right_count() const { return right_count_; }
  const std::vector<BaseEdge>& edges() const { return edges_; }

  // Edges of right node r as (left, w), sorted by left.
  const std::vector<Edge>& right_adjacency(int r) const {
    return right_adj_[static_cast<std::size_t>(r)];
  }

  bool has_osbm() const { return genre_count_ > 0; }
  int genre_count() const { return genre_count_; }
  const std::vector<int>& left_genres(int left) const {
    return left_genres_[static_cast<std::size_t>(left)];
  }
  const std::vector<double>& right_ratings(int right) const {
    return right_ratings_[static_cast<std::size_t>(right)];
  }

  // Genres per left node and ratings per right node; both indexed by the base
  // graph's own ids. Missing ratings default to 0.
  void set_osbm_annotations(int genre_count, std::vector<std::vector<int>> left_genres,
                            std::vector<std::vector<double>> right_ratings);

 private:
  int left_count_ = 0;
  int right_count_ = 0;
  std::vector<BaseEdge> edges_;
  std::vector<std::vector<Edge>> right_adj_;
  int genre_count_ = 0;
  std::vector<std::vector<int>> left_genres_;
  std::vector<std::vector<double>> right_ratings_;
};

// `u,v,w` rows (an optional non-numeric header line is skipped). Node counts
// are one past the largest id seen unless given explicitly.
BaseGraph parse_base_graph_csv(std::string_view text, std::optional<int> left_count = {},
                               std::optional<int> right_count = {});

// Sidecars: `u,genre` rows and `user,genre,rating` rows.
void parse_osbm_sidecars(BaseGraph& base, std::string_view genres_csv,
                         std::string_view ratings_csv);

BaseGraph load_base_graph(const std::filesystem::path& edges_csv,
                          const std::optional<std::filesystem::path>& genres_csv = {},
                          const std::optional<std::filesystem::path>& ratings_csv = {});

}  // namespace matchlab

#endif  // MATCHLAB_BASE_GRAPH_HPP_
