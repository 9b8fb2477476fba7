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

#include "matchlab/base_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "matchlab/error.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    std::string_view f = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(std::string(s), &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// Calls fn(line_no, fields) for every data row. A first line whose leading
// field is not an integer is treated as a header.
template <typename Fn>
void for_each_row(std::string_view text, std::size_t arity, const char* what, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (line.front() == '#') continue;
    auto fields = split_fields(line);
    int probe = 0;
    if (line_no == 1 && !parse_int(fields.front(), probe)) continue;
    if (fields.size() != arity) {
      throw ValidationError(std::string(what) + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(arity) + " fields");
    }
    fn(line_no, fields);
  }
}

}  // namespace

BaseGraph::BaseGraph(int left_count, int right_count, std::vector<BaseEdge> edges)
    : left_count_(left_count), right_count_(right_count), edges_(std::move(edges)) {
  if (left_count_ <= 0 || right_count_ <= 0) throw ValidationError("base graph: empty side");
  right_adj_.resize(static_cast<std::size_t>(right_count_));
  std::set<std::pair<int, int>> seen;
  for (const BaseEdge& e : edges_) {
    if (e.left < 0 || e.left >= left_count_ || e.right < 0 || e.right >= right_count_) {
      throw ValidationError("base graph: edge (" + std::to_string(e.left) + "," +
                            std::to_string(e.right) + ") out of range");
    }
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw ValidationError("base graph: edge (" + std::to_string(e.left) + "," +
                            std::to_string(e.right) + ") has non-positive weight");
    }
    if (!seen.insert({e.left, e.right}).second) {
      throw ValidationError("base graph: duplicate edge (" + std::to_string(e.left) + "," +
                            std::to_string(e.right) + ")");
    }
    right_adj_[static_cast<std::size_t>(e.right)].push_back({e.left, e.w});
  }
  for (auto& adj : right_adj_) {
    std::sort(adj.begin(), adj.end(), [](const Edge& a, const Edge& b) { return a.u < b.u; });
  }
}

void BaseGraph::set_osbm_annotations(int genre_count, std::vector<std::vector<int>> left_genres,
                                     std::vector<std::vector<double>> right_ratings) {
  if (genre_count <= 0) throw ValidationError("base graph: genre_count must be positive");
  left_genres.resize(static_cast<std::size_t>(left_count_));
  right_ratings.resize(static_cast<std::size_t>(right_count_));
  for (auto& g : left_genres) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    for (int z : g) {
      if (z < 0 || z >= genre_count) throw ValidationError("base graph: genre out of range");
    }
  }
  for (auto& r : right_ratings) {
    r.resize(static_cast<std::size_t>(genre_count), 0.0);
    for (double x : r) {
      if (!std::isfinite(x) || x < 0.0) throw ValidationError("base graph: negative rating");
    }
  }
  genre_count_ = genre_count;
  left_genres_ = std::move(left_genres);
  right_ratings_ = std::move(right_ratings);
}

BaseGraph parse_base_graph_csv(std::string_view text, std::optional<int> left_count,
                               std::optional<int> right_count) {
  std::vector<BaseEdge> edges;
  int max_left = -1;
  int max_right = -1;
  for_each_row(text, 3, "base graph", [&](int line_no, const auto& f) {
    BaseEdge e;
    if (!parse_int(f[0], e.left) || !parse_int(f[1], e.right) || !parse_real(f[2], e.w)) {
      throw ValidationError("base graph line " + std::to_string(line_no) + ": malformed row");
    }
    max_left = std::max(max_left, e.left);
    max_right = std::max(max_right, e.right);
    edges.push_back(e);
  });
  return BaseGraph(left_count.value_or(max_left + 1), right_count.value_or(max_right + 1),
                   std::move(edges));
}

void parse_osbm_sidecars(BaseGraph& base, std::string_view genres_csv,
                         std::string_view ratings_csv) {
  std::vector<std::vector<int>> genres(static_cast<std::size_t>(base.left_count()));
  int genre_count = 0;
  for_each_row(genres_csv, 2, "genres", [&](int line_no, const auto& f) {
    int u = 0;
    int z = 0;
    if (!parse_int(f[0], u) || !parse_int(f[1], z) || u < 0 || u >= base.left_count() || z < 0) {
      throw ValidationError("genres line " + std::to_string(line_no) + ": malformed row");
    }
    genres[static_cast<std::size_t>(u)].push_back(z);
    genre_count = std::max(genre_count, z + 1);
  });
  std::vector<std::tuple<int, int, double>> rows;
  for_each_row(ratings_csv, 3, "ratings", [&](int line_no, const auto& f) {
    int user = 0;
    int z = 0;
    double r = 0.0;
    if (!parse_int(f[0], user) || !parse_int(f[1], z) || !parse_real(f[2], r) || user < 0 ||
        user >= base.right_count() || z < 0) {
      throw ValidationError("ratings line " + std::to_string(line_no) + ": malformed row");
    }
    genre_count = std::max(genre_count, z + 1);
    rows.emplace_back(user, z, r);
  });
  std::vector<std::vector<double>> ratings(static_cast<std::size_t>(base.right_count()),
                                           std::vector<double>(static_cast<std::size_t>(genre_count), 0.0));
  for (const auto& [user, z, r] : rows) {
    ratings[static_cast<std::size_t>(user)][static_cast<std::size_t>(z)] = r;
  }
  base.set_osbm_annotations(genre_count, std::move(genres), std::move(ratings));
}

BaseGraph load_base_graph(const std::filesystem::path& edges_csv,
                          const std::optional<std::filesystem::path>& genres_csv,
                          const std::optional<std::filesystem::path>& ratings_csv) {
  BaseGraph base = parse_base_graph_csv(read_file(edges_csv));
  if (genres_csv.has_value() != ratings_csv.has_value()) {
    throw ConfigError("OSBM base graphs need both the genres and the ratings sidecar");
  }
  if (genres_csv) parse_osbm_sidecars(base, read_file(*genres_csv), read_file(*ratings_csv));
  return base;
}

}  // namespace matchlab
