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

#include "matchlab/checkpoint.hpp"

#include "matchlab/error.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "matchlab-checkpoint/1";

std::string encode_mlp(const MlpParams& p) {
  std::string out = "{\"dims\":[";
  const auto dims = p.dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(dims[i]);
  }
  out += "],\"values\":[";
  const auto flat = p.flatten();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i) out += ',';
    out += format_double(flat[i]);
  }
  out += "]}";
  return out;
}

MlpParams decode_mlp(const json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  MlpParams p = zero_params(dims);
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != p.parameter_count()) {
    throw ValidationError("checkpoint: expected " + std::to_string(p.parameter_count()) +
                          " parameters, found " + std::to_string(values.size()));
  }
  p.unflatten(values);
  p.revision = 0;
  return p;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
  std::string out = "{\"format\":";
  out += json(kFormat).dump();
  out += ",\"kind\":" + json(c.kind).dump();
  out += ",\"problem\":" + json(c.problem).dump();
  out += ",\"u_count\":" + (c.u_count ? std::to_string(*c.u_count) : std::string("null"));
  out += ",\"params\":" + (c.params ? encode_mlp(*c.params) : std::string("null"));
  out += ",\"scalars\":" + c.scalars.dump();
  out += ",\"config\":" + c.config.dump();
  out += ",\"seed_lineage\":[";
  for (std::size_t i = 0; i < c.seed_lineage.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c.seed_lineage[i]);
  }
  out += "],\"training\":";
  if (c.training) {
    const TrainingSnapshot& t = *c.training;
    out += "{\"epochs_done\":" + std::to_string(t.epochs_done);
    out += ",\"learning_rate\":" + format_double(t.learning_rate);
    out += ",\"baseline\":" + format_double(t.baseline);
    out += std::string(",\"baseline_initialized\":") + (t.baseline_initialized ? "true" : "false");
    out += ",\"best_validation\":" + format_double(t.best_validation);
    out += ",\"adam\":{\"step\":" + std::to_string(t.adam.step);
    out += ",\"learning_rate\":" + format_double(t.adam.learning_rate);
    out += ",\"beta1\":" + format_double(t.adam.beta1);
    out += ",\"beta2\":" + format_double(t.adam.beta2);
    out += ",\"epsilon\":" + format_double(t.adam.epsilon);
    out += ",\"m\":" + encode_mlp(t.adam.first_moment);
    out += ",\"v\":" + encode_mlp(t.adam.second_moment);
    out += "}}";
  } else {
    out += "null";
  }
  out += "}\n";
  return out;
}

Checkpoint decode_checkpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("checkpoint: malformed JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ValidationError("checkpoint: unsupported format " + j.at("format").dump());
    }
    Checkpoint c;
    c.kind = j.at("kind").get<std::string>();
    c.problem = j.at("problem").get<std::string>();
    if (!j.at("u_count").is_null()) c.u_count = j.at("u_count").get<int>();
    if (!j.at("params").is_null()) c.params = decode_mlp(j.at("params"));
    c.scalars = j.at("scalars");
    c.config = j.at("config");
    c.seed_lineage = j.at("seed_lineage").get<std::vector<std::uint64_t>>();
    if (!j.at("training").is_null()) {
      const json& t = j.at("training");
      TrainingSnapshot s;
      s.epochs_done = t.at("epochs_done").get<int>();
      s.learning_rate = t.at("learning_rate").get<double>();
      s.baseline = t.at("baseline").get<double>();
      s.baseline_initialized = t.at("baseline_initialized").get<bool>();
      s.best_validation = t.at("best_validation").get<double>();
      const json& a = t.at("adam");
      s.adam.step = a.at("step").get<std::int64_t>();
      s.adam.learning_rate = a.at("learning_rate").get<double>();
      s.adam.beta1 = a.at("beta1").get<double>();
      s.adam.beta2 = a.at("beta2").get<double>();
      s.adam.epsilon = a.at("epsilon").get<double>();
      s.adam.first_moment = decode_mlp(a.at("m"));
      s.adam.second_moment = decode_mlp(a.at("v"));
      c.training = std::move(s);
    }
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file_atomic(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

}  // namespace matchlab
