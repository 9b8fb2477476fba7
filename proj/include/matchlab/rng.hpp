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

#ifndef MATCHLAB_RNG_HPP_
#define MATCHLAB_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace matchlab {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based seed derivation: every (base, path...) names an independent
// stream, so parallel workers never share generator state.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(base, path));
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1].
inline double uniform_open_closed(Rng& rng) { return 1.0 - uniform01(rng); }

// Stream tags for derive_seed.
enum : std::uint64_t {
  kStreamInstance = 1,
  kStreamFixedNodes = 2,
  kStreamEpisode = 3,
  kStreamShuffle = 4,
  kStreamPermute = 5,
  kStreamInit = 6,
  kStreamTransfer = 7,
};

}  // namespace matchlab

#endif  // MATCHLAB_RNG_HPP_
