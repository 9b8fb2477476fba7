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

#ifndef MATCHLAB_ASSIGNMENT_HPP_
#define MATCHLAB_ASSIGNMENT_HPP_

#include <vector>

namespace matchlab {

// Dense rectangular maximum-weight assignment (Hungarian method with
// potentials, O(r^2 c) for r <= c). `value[i][j]` is the benefit of pairing
// row i with column j. Every row of the smaller side is assigned; the result
// maps each row to a column, or -1 when rows outnumber columns.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& value);

// Dinic max flow on a small directed graph with integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  // Returns an index usable with flow_on().
  int add_edge(int from, int to, long long capacity);
  long long run(int source, int sink);
  long long flow_on(int edge) const;

 private:
  struct Arc {
    int to;
    long long cap;
    long long flow;
  };
  bool bfs(int s, int t);
  long long dfs(int v, int t, long long pushed);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace matchlab

#endif  // MATCHLAB_ASSIGNMENT_HPP_
