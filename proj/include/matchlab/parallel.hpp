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

#ifndef MATCHLAB_PARALLEL_HPP_
#define MATCHLAB_PARALLEL_HPP_

#include <exception>
#include <vector>

#include <omp.h>

namespace matchlab {

// Sets the OpenMP worker count used by every *_parallel kernel. n <= 0 keeps
// the runtime default.
inline void set_workers(int n) {
  if (n > 0) omp_set_num_threads(n);
}

inline int worker_count() { return omp_get_max_threads(); }

// Runs fn(i) for i in [0, n) on the OpenMP pool. Exceptions are captured per
// index and the lowest-index one is rethrown, so error reporting does not
// depend on scheduling.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n > 0 ? n : 0));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace matchlab

#endif  // MATCHLAB_PARALLEL_HPP_
