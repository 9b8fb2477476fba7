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

#include "matchlab/assignment.hpp"

#include <limits>

#include "matchlab/error.hpp"

namespace matchlab {

namespace {

// Minimum-cost assignment of every row to a distinct column, rows <= cols.
// 1-based potentials formulation.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost, int rows, int cols) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(rows + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(cols + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(cols + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(cols + 1), 0);
  for (int i = 1; i <= rows; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(cols + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(cols + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= cols; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& value) {
  const int rows = static_cast<int>(value.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(value.front().size());
  for (const auto& r : value) {
    if (static_cast<int>(r.size()) != cols) throw ContractViolation("assignment: ragged matrix");
  }
  if (rows <= cols) {
    std::vector<std::vector<double>> cost(value.size(), std::vector<double>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return hungarian_min(cost, rows, cols);
  }
  // Transpose so the smaller side is the row side.
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(cols), std::vector<double>(static_cast<std::size_t>(rows)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) cost[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const auto col_to_row = hungarian_min(cost, cols, rows);
  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  for (int j = 0; j < cols; ++j) row_to_col[static_cast<std::size_t>(col_to_row[static_cast<std::size_t>(j)])] = j;
  return row_to_col;
}

MaxFlow::MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

int MaxFlow::add_edge(int from, int to, long long capacity) {
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, capacity, 0});
  adj_[static_cast<std::size_t>(from)].push_back(id);
  arcs_.push_back({from, 0, 0});
  adj_[static_cast<std::size_t>(to)].push_back(id + 1);
  return id;
}

long long MaxFlow::flow_on(int edge) const { return arcs_[static_cast<std::size_t>(edge)].flow; }

bool MaxFlow::bfs(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::vector<int> queue{s};
  level_[static_cast<std::size_t>(s)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int id : adj_[static_cast<std::size_t>(v)]) {
      const Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (a.cap - a.flow > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
        level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(v)] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(t)] >= 0;
}

long long MaxFlow::dfs(int v, int t, long long pushed) {
  if (v == t || pushed == 0) return pushed;
  auto& it = next_[static_cast<std::size_t>(v)];
  for (; it < adj_[static_cast<std::size_t>(v)].size(); ++it) {
    const int id = adj_[static_cast<std::size_t>(v)][it];
    Arc& a = arcs_[static_cast<std::size_t>(id)];
    if (level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(v)] + 1 || a.cap - a.flow <= 0) continue;
    const long long got = dfs(a.to, t, std::min(pushed, a.cap - a.flow));
    if (got > 0) {
      a.flow += got;
      arcs_[static_cast<std::size_t>(id ^ 1)].flow -= got;
      return got;
    }
  }
  return 0;
}

long long MaxFlow::run(int source, int sink) {
  long long total = 0;
  while (bfs(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (long long f = dfs(source, sink, std::numeric_limits<long long>::max())) total += f;
  }
  return total;
}

}  // namespace matchlab
