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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("matchlab_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write_config(const std::string& text, const std::string& name = "cfg.json") {
    std::ofstream(dir_ / name) << text;
  }

  // Runs the CLI inside the scratch directory; returns its exit code.
  int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" + MATCHLAB_CLI_PATH + "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return slurp(dir_ / "stdout.txt"); }
  std::string err() const { return slurp(dir_ / "stderr.txt"); }

  fs::path dir_;
};

const char* kToyConfig = R"({
  // toy pipeline
  "seed": 7,
  "generate": {"kind": "er", "u": 5, "v": 12, "p": 0.5, "count": 50},
  "solve": {"dataset": "d/dataset.jsonl"},
  "tune-baseline": {"dataset": "d/dataset.jsonl"},
  "train": {"policy": "inv_ff_hist", "dataset": "d/dataset.jsonl", "validation": "v/dataset.jsonl",
            "epochs": 3, "batch_size": 10, "hidden": [16, 16]},
  "evaluate": {"checkpoint": "m/best.ckpt.json", "dataset": "v/dataset.jsonl"}
})";

TEST_F(CliTest, GenerateIsStable) {
  write_config(R"({"seed": 7, "generate": {"kind": "er", "u": 10, "v": 30, "p": 0.5, "count": 100}})");
  ASSERT_EQ(run("generate --config cfg.json --out a"), 0) << err();
  const std::string first = out();
  ASSERT_EQ(run("generate --config cfg.json --out b"), 0) << err();
  const auto hash_of = [](const std::string& s) { return s.substr(s.find("hash")); };
  EXPECT_EQ(hash_of(out()), hash_of(first));
  const auto data = slurp(dir_ / "a" / "dataset.jsonl");
  EXPECT_EQ(std::count(data.begin(), data.end(), '\n'), 100);
  EXPECT_EQ(data, slurp(dir_ / "b" / "dataset.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "generate.manifest.json"));
  const auto m = nlohmann::json::parse(slurp(dir_ / "a" / "generate.manifest.json"));
  EXPECT_EQ(m.at("command"), "generate");
  EXPECT_EQ(m.at("seed"), 7);
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.at("outputs").contains("a/dataset.jsonl"));
}

TEST_F(CliTest, InvalidProbabilityExitsTwo) {
  write_config(R"({"seed": 7, "generate": {"kind": "er", "u": 10, "v": 30, "p": 1.5, "count": 10}})");
  EXPECT_EQ(run("generate --config cfg.json --out a"), 2);
  EXPECT_FALSE(err().empty());
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  write_config(R"({"generate": {"kind": "er"}})");
  EXPECT_EQ(run("generate --config cfg.json"), 2);  // no seed anywhere
  EXPECT_EQ(run("generate --config missing.json --seed 1"), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  write_config(R"({"seed": 1, "generate": {"kind": "er", "colour": 3}})");
  EXPECT_EQ(run("generate --config cfg.json"), 2);
}

TEST_F(CliTest, RuntimeFailureExitsOne) {
  write_config(R"({"seed": 1, "solve": {"dataset": "d.jsonl"}})");
  std::ofstream(dir_ / "d.jsonl") << "{\"this is\": \"not an instance\"}\n";
  const int code = run("solve --config cfg.json");
  EXPECT_TRUE(code == 1 || code == 2) << code;
  fs::create_directories(dir_ / "ro");
  write_config(R"({"seed": 1, "generate": {"kind": "er", "u": 3, "v": 4, "count": 2}})");
  std::ofstream(dir_ / "blocker") << "x";
  EXPECT_EQ(run("generate --config cfg.json --out blocker/sub"), 1);
}

TEST_F(CliTest, SolveWritesCacheAndHonoursEnv) {
  write_config(kToyConfig);
  ASSERT_EQ(run("generate --config cfg.json --out d"), 0) << err();
  ASSERT_EQ(run("solve --config cfg.json --out s", "MATCHLAB_CACHE=cache_root"), 0) << err();
  ASSERT_TRUE(fs::exists(dir_ / "cache_root"));
  std::size_t lines = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "cache_root")) {
    const auto text = slurp(e.path());
    lines += static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  }
  EXPECT_EQ(lines, 50u);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "solve.manifest.json"));
}

TEST_F(CliTest, SolveCorruptCacheIsPreserved) {
  write_config(kToyConfig);
  ASSERT_EQ(run("generate --config cfg.json --out d"), 0);
  ASSERT_EQ(run("solve --config cfg.json --out s", "MATCHLAB_CACHE=c"), 0) << err();
  fs::path cache_file;
  for (const auto& e : fs::directory_iterator(dir_ / "c")) cache_file = e.path();
  std::ofstream(cache_file, std::ios::app) << "garbage\n";
  ASSERT_EQ(run("solve --config cfg.json --out s", "MATCHLAB_CACHE=c"), 0) << err();
  bool preserved = false;
  for (const auto& e : fs::directory_iterator(dir_ / "c")) {
    preserved |= e.path().string().find(".corrupt") != std::string::npos;
  }
  EXPECT_TRUE(preserved);
}

TEST_F(CliTest, SolveRefusalsWarn) {
  // OSBM base graph: 6 movies, 4 users, 3 genres; limits below force refusal.
  std::ofstream edges(dir_ / "edges.csv");
  std::ofstream genres(dir_ / "genres.csv");
  std::ofstream ratings(dir_ / "ratings.csv");
  edges << "u,v,w\n";
  genres << "u,genre\n";
  ratings << "user,genre,rating\n";
  for (int u = 0; u < 6; ++u) {
    genres << u << ',' << u % 3 << '\n';
    for (int v = 0; v < 4; ++v) edges << u << ',' << v << ",1\n";
  }
  for (int v = 0; v < 4; ++v) {
    for (int z = 0; z < 3; ++z) ratings << v << ',' << z << ',' << 1 + (v + z) % 5 << '\n';
  }
  edges.close();
  genres.close();
  ratings.close();
  write_config(R"({"seed": 2,
    "generate": {"kind": "base_graph", "u": 5, "v": 6, "count": 3,
                 "base_graph": {"edges": "edges.csv", "genres": "genres.csv", "ratings": "ratings.csv"}},
    "solve": {"dataset": "d/dataset.jsonl", "limits": {"max_fixed": 2}}})");
  ASSERT_EQ(run("generate --config cfg.json --out d"), 0) << err();
  EXPECT_EQ(run("solve --config cfg.json --out s"), 0) << err();
  EXPECT_NE(err().find("refused"), std::string::npos);
}

TEST_F(CliTest, TuneBaselineOnUnitWeights) {
  std::ofstream data(dir_ / "ones.jsonl");
  write_config(R"({"seed": 1, "generate": {"kind": "er", "u": 4, "v": 8, "p": 0.5, "count": 5}})");
  ASSERT_EQ(run("generate --config cfg.json --out g"), 0);
  // Rewrite every weight to 1.
  std::istringstream lines(slurp(dir_ / "g" / "dataset.jsonl"));
  std::string line;
  while (std::getline(lines, line)) {
    auto j = nlohmann::ordered_json::parse(line);
    std::function<void(nlohmann::ordered_json&)> fix = [&](nlohmann::ordered_json& x) {
      if (x.is_object()) {
        for (auto& [k, v] : x.items()) {
          if (k == "w" || k == "weight") v = 1.0;
          else fix(v);
        }
      } else if (x.is_array()) {
        if (x.size() == 2 && x[0].is_number_integer() && x[1].is_number_float()) x[1] = 1.0;
        for (auto& v : x) fix(v);
      }
    };
    fix(j);
    data << j.dump() << '\n';
  }
  data.close();
  write_config(R"({"seed": 1, "tune-baseline": {"dataset": "ones.jsonl"}})");
  ASSERT_EQ(run("tune-baseline --config cfg.json --out t"), 0) << err();
  EXPECT_NE(out().find("w_T = 0.01"), std::string::npos) << out();
  EXPECT_TRUE(fs::exists(dir_ / "t" / "tune-baseline.manifest.json"));
}

TEST_F(CliTest, OracleReplayEvaluatesToOne) {
  write_config(kToyConfig);
  ASSERT_EQ(run("generate --config cfg.json --out v"), 0);
  write_config(R"({"seed": 7, "evaluate": {"policy": "oracle", "dataset": "v/dataset.jsonl"}})", "oracle.json");
  ASSERT_EQ(run("evaluate --config oracle.json --out e"), 0) << err();
  const auto s = nlohmann::json::parse(slurp(dir_ / "e" / "summary.json"));
  EXPECT_NEAR(s.at("mean").get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, TrainThenEvaluateEndToEnd) {
  write_config(kToyConfig);
  const auto t0 = std::chrono::steady_clock::now();
  ASSERT_EQ(run("generate --config cfg.json --out d"), 0);
  ASSERT_EQ(run("generate --config cfg.json --seed 8 --out v"), 0);
  ASSERT_EQ(run("train --config cfg.json --out m"), 0) << err();
  ASSERT_EQ(run("evaluate --config cfg.json --out e"), 0) << err();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
  std::cout << "toy train+evaluate: " << secs << " s\n";
  for (const char* f : {"m/train_log.csv", "m/validation.csv", "m/last.ckpt.json", "m/best.ckpt.json",
                        "m/train.manifest.json", "e/report.csv", "e/summary.json", "e/evaluate.manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const auto log = slurp(dir_ / "m/train_log.csv");
  EXPECT_EQ(log.substr(0, log.find('\n')), "epoch,batch,mean_reward,mean_cost,baseline,lr,entropy");
}

TEST_F(CliTest, OutputsIndependentOfWorkers) {
  write_config(kToyConfig);
  ASSERT_EQ(run("generate --config cfg.json --out d"), 0);
  ASSERT_EQ(run("generate --config cfg.json --seed 8 --out v"), 0);
  for (const char* w : {"1", "3"}) {
    const std::string sfx = w;
    ASSERT_EQ(run("generate --config cfg.json --workers " + sfx + " --out g" + sfx), 0);
    ASSERT_EQ(run("train --config cfg.json --workers " + sfx + " --out m" + sfx), 0) << err();
    write_config(std::string(R"({"seed": 7, "evaluate": {"checkpoint": "m)") + sfx +
                     R"(/best.ckpt.json", "dataset": "v/dataset.jsonl", "decode": "sample"}})",
                 "eval" + sfx + ".json");
    ASSERT_EQ(run("evaluate --config eval" + sfx + ".json --workers " + sfx + " --out e" + sfx), 0) << err();
  }
  EXPECT_EQ(slurp(dir_ / "g1/dataset.jsonl"), slurp(dir_ / "g3/dataset.jsonl"));
  for (const char* f : {"best.ckpt.json", "last.ckpt.json", "train_log.csv", "validation.csv"}) {
    EXPECT_EQ(slurp(dir_ / "m1" / f), slurp(dir_ / "m3" / f)) << f;
  }
  EXPECT_EQ(slurp(dir_ / "e1/report.csv"), slurp(dir_ / "e3/report.csv"));
  EXPECT_EQ(slurp(dir_ / "e1/summary.json"), slurp(dir_ / "e3/summary.json"));
}

}  // namespace
