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

#include <filesystem>

#include <gtest/gtest.h>

#include "matchlab/dataset_io.hpp"
#include "matchlab/error.hpp"
#include "matchlab/generators.hpp"
#include "matchlab/text_format.hpp"
#include "support.hpp"

namespace matchlab {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "matchlab_tests";
  fs::create_directories(dir);
  return dir / name;
}

TEST(GraphCore, SingleInstanceRoundTrip) {
  BipartiteInstance inst(2, {Arrival{{{0, 0.5}}, std::nullopt}}, EobmPayload{});
  const auto line = encode_instance(inst);
  EXPECT_NE(line.find("\"u_count\":2"), std::string::npos);
  EXPECT_EQ(decode_instance(line), inst);
}

TEST(GraphCore, EmptyDatasetRoundTrip) {
  const auto path = temp_file("empty.jsonl");
  write_dataset({}, path);
  EXPECT_EQ(read_file(path), "");
  EXPECT_TRUE(read_dataset(path).empty());
}

TEST(GraphCore, SeededErDatasetRoundTripsExactly) {
  GenSpec spec;
  spec.count = 100;
  spec.seed = 5;
  const Dataset d = generate_dataset(spec);
  const auto path = temp_file("er100.jsonl");
  write_dataset(d, path);
  const Dataset back = read_dataset(path);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(back[i], d[i]);
  // read then write reproduces the bytes.
  const auto again = temp_file("er100b.jsonl");
  write_dataset(back, again);
  EXPECT_EQ(read_file(path), read_file(again));
}

TEST(GraphCore, AllPayloadKindsRoundTrip) {
  Rng rng(9);
  for (const auto& inst : {testing::random_eobm(rng, 4, 6), testing::random_osbm(rng, 4, 6, 3, 2),
                           testing::random_adwords(rng, 4, 6, false)}) {
    EXPECT_EQ(decode_instance(encode_instance(inst)), inst);
  }
}

TEST(GraphCore, MixedKindsRejected) {
  Rng rng(1);
  Dataset d{testing::random_eobm(rng, 3, 3), testing::random_adwords(rng, 3, 3, true)};
  EXPECT_THROW(encode_dataset(d), ValidationError);
}

TEST(GraphCore, UnwritablePathIsIoError) {
  EXPECT_THROW(write_dataset({}, "/proc/definitely/not/here.jsonl"), IoError);
}

TEST(GraphCore, EdgeOutOfRangeNamesLineAndField) {
  const std::string text =
      "{\"u_count\":3,\"arrivals\":[{\"edges\":[[0,0.1]]}],\"payload\":{\"kind\":\"eobm\"},\"meta\":{}}\n"
      "{\"u_count\":3,\"arrivals\":[{\"edges\":[[5,0.3]]}],\"payload\":{\"kind\":\"eobm\"},\"meta\":{}}\n";
  try {
    decode_dataset(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("arrivals[0].edges[0]"), std::string::npos) << msg;
  }
}

TEST(GraphCore, NonPositiveWeightAndEmptyArrivalRejected) {
  EXPECT_THROW(decode_instance("{\"u_count\":2,\"arrivals\":[{\"edges\":[[0,0]]}],\"payload\":{\"kind\":\"eobm\"},\"meta\":{}}"),
               ValidationError);
  EXPECT_THROW(decode_instance("{\"u_count\":2,\"arrivals\":[{\"edges\":[]}],\"payload\":{\"kind\":\"eobm\"},\"meta\":{}}"),
               ValidationError);
}

TEST(GraphCore, MinimalOsbmFileParses) {
  const auto inst = decode_instance(
      "{\"u_count\":1,\"arrivals\":[{\"edges\":[[0,1]],\"user\":0}],"
      "\"payload\":{\"kind\":\"osbm\",\"genre_count\":1,\"genres_per_u\":[[0]],\"user_weights\":[[2.5]]},\"meta\":{}}");
  ASSERT_EQ(inst.kind(), ProblemKind::kOsbm);
  EXPECT_EQ(inst.osbm().genres_per_u[0], std::vector<int>{0});
  EXPECT_EQ(inst.arrival(0).user, 0);
}

TEST(GraphCore, ValidateReportsEachViolation) {
  Rng rng(2);
  EXPECT_TRUE(validate(testing::random_eobm(rng, 3, 4)).empty());

  BipartiteInstance dup(3, {Arrival{{{1, 0.5}, {1, 0.7}}, std::nullopt}}, EobmPayload{});
  EXPECT_EQ(validate(dup).size(), 1u);

  OsbmPayload p;
  p.genre_count = 1;
  p.genres_per_u = {{0}};
  p.user_weights = {{1.0}};
  BipartiteInstance unknown_user(1, {Arrival{{{0, 1.0}}, 4}}, p);
  const auto v = validate(unknown_user);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].location.find("user"), std::string::npos);
}

TEST(GraphCore, PermuteFixedNodesRelabels) {
  Rng rng(4);
  const auto inst = testing::random_osbm(rng, 4, 5, 3, 2);
  const std::vector<int> perm{2, 0, 3, 1};
  const auto p = permute_fixed_nodes(inst, perm);
  EXPECT_TRUE(validate(p).empty());
  for (int t = 0; t < inst.horizon(); ++t) {
    for (const Edge& e : inst.arrival(t).edges) {
      const Edge* q = p.arrival(t).find(perm[static_cast<std::size_t>(e.u)]);
      ASSERT_NE(q, nullptr);
      EXPECT_EQ(q->w, e.w);
    }
  }
  for (int u = 0; u < 4; ++u) EXPECT_EQ(p.osbm().genres_per_u[static_cast<std::size_t>(perm[static_cast<std::size_t>(u)])], inst.osbm().genres_per_u[static_cast<std::size_t>(u)]);
}

TEST(GraphCore, WeightsUseSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  BipartiteInstance inst(1, {Arrival{{{0, 0.1}}, std::nullopt}}, EobmPayload{});
  EXPECT_EQ(decode_instance(encode_instance(inst)).arrival(0).edges[0].w, 0.1);
}

}  // namespace
}  // namespace matchlab
