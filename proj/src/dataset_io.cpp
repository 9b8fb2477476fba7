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

#include "matchlab/dataset_io.hpp"

#include <json.hpp>
#include <sstream>

#include "matchlab/error.hpp"
#include "matchlab/text_format.hpp"

namespace matchlab {

using nlohmann::json;

namespace {

std::string quoted(const std::string& s) { return json(s).dump(); }

void append_doubles(std::string& out, const std::vector<double>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  out += ']';
}

void append_ints(std::string& out, const std::vector<int>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  out += ']';
}

[[noreturn]] void fail(int line_no, const std::string& field, const std::string& what) {
  throw ValidationError("line " + std::to_string(line_no) + ": " + field + ": " + what);
}

const json& require(const json& obj, const char* key, int line_no, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(line_no, path + key, "missing");
  return obj.at(key);
}

int as_int(const json& j, int line_no, const std::string& field) {
  if (!j.is_number_integer()) fail(line_no, field, "expected integer");
  return j.get<int>();
}

double as_double(const json& j, int line_no, const std::string& field) {
  if (!j.is_number()) fail(line_no, field, "expected number");
  return j.get<double>();
}

}  // namespace

std::string encode_instance(const BipartiteInstance& instance) {
  std::string out;
  out.reserve(64 + 24 * static_cast<std::size_t>(instance.horizon()) * 4);
  out += "{\"u_count\":";
  out += std::to_string(instance.u_count());
  out += ",\"arrivals\":[";
  const auto& arrivals = instance.arrivals();
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    if (t) out += ',';
    out += "{\"edges\":[";
    const auto& edges = arrivals[t].edges;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (k) out += ',';
      out += '[';
      out += std::to_string(edges[k].u);
      out += ',';
      out += format_double(edges[k].w);
      out += ']';
    }
    out += ']';
    if (arrivals[t].user) {
      out += ",\"user\":";
      out += std::to_string(*arrivals[t].user);
    }
    out += '}';
  }
  out += "],\"payload\":";
  switch (instance.kind()) {
    case ProblemKind::kEobm:
      out += "{\"kind\":\"eobm\"}";
      break;
    case ProblemKind::kOsbm: {
      const OsbmPayload& p = instance.osbm();
      out += "{\"kind\":\"osbm\",\"genre_count\":";
      out += std::to_string(p.genre_count);
      out += ",\"genres_per_u\":[";
      for (std::size_t u = 0; u < p.genres_per_u.size(); ++u) {
        if (u) out += ',';
        append_ints(out, p.genres_per_u[u]);
      }
      out += "],\"user_weights\":[";
      for (std::size_t l = 0; l < p.user_weights.size(); ++l) {
        if (l) out += ',';
        append_doubles(out, p.user_weights[l]);
      }
      out += "]}";
      break;
    }
    case ProblemKind::kAdwords:
      out += "{\"kind\":\"adwords\",\"budgets\":";
      append_doubles(out, instance.adwords().budgets);
      out += '}';
      break;
  }
  const InstanceMeta& meta = instance.meta();
  out += ",\"meta\":{\"generator\":";
  out += quoted(meta.generator);
  out += ",\"seed\":";
  out += std::to_string(meta.seed);
  out += ",\"params\":{";
  bool first = true;
  for (const auto& [k, v] : meta.params) {
    if (!first) out += ',';
    first = false;
    out += quoted(k);
    out += ':';
    out += quoted(v);
  }
  out += "}}}";
  return out;
}

BipartiteInstance decode_instance(std::string_view line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(line_no, "<record>", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail(line_no, "<record>", "expected an object");

  const int u_count = as_int(require(j, "u_count", line_no, ""), line_no, "u_count");

  std::vector<Arrival> arrivals;
  const json& ja = require(j, "arrivals", line_no, "");
  if (!ja.is_array()) fail(line_no, "arrivals", "expected array");
  arrivals.reserve(ja.size());
  for (std::size_t t = 0; t < ja.size(); ++t) {
    const std::string path = "arrivals[" + std::to_string(t) + "].";
    Arrival a;
    const json& je = require(ja[t], "edges", line_no, path);
    if (!je.is_array()) fail(line_no, path + "edges", "expected array");
    for (std::size_t k = 0; k < je.size(); ++k) {
      const std::string field = path + "edges[" + std::to_string(k) + "]";
      const json& pair = je[k];
      if (!pair.is_array() || pair.size() != 2) fail(line_no, field, "expected [u, w]");
      a.edges.push_back({as_int(pair[0], line_no, field + ".u"), as_double(pair[1], line_no, field + ".w")});
    }
    if (ja[t].contains("user") && !ja[t].at("user").is_null()) {
      a.user = as_int(ja[t].at("user"), line_no, path + "user");
    }
    arrivals.push_back(std::move(a));
  }

  const json& jp = require(j, "payload", line_no, "");
  const json& jk = require(jp, "kind", line_no, "payload.");
  if (!jk.is_string()) fail(line_no, "payload.kind", "expected string");
  const std::string kind = jk.get<std::string>();
  Payload payload;
  if (kind == "eobm") {
    payload = EobmPayload{};
  } else if (kind == "osbm") {
    OsbmPayload p;
    p.genre_count = as_int(require(jp, "genre_count", line_no, "payload."), line_no, "payload.genre_count");
    const json& jg = require(jp, "genres_per_u", line_no, "payload.");
    if (!jg.is_array()) fail(line_no, "payload.genres_per_u", "expected array");
    for (std::size_t u = 0; u < jg.size(); ++u) {
      const std::string field = "payload.genres_per_u[" + std::to_string(u) + "]";
      if (!jg[u].is_array()) fail(line_no, field, "expected array");
      std::vector<int> genres;
      for (const json& z : jg[u]) genres.push_back(as_int(z, line_no, field));
      p.genres_per_u.push_back(std::move(genres));
    }
    const json& jw = require(jp, "user_weights", line_no, "payload.");
    if (!jw.is_array()) fail(line_no, "payload.user_weights", "expected array");
    for (std::size_t l = 0; l < jw.size(); ++l) {
      const std::string field = "payload.user_weights[" + std::to_string(l) + "]";
      if (!jw[l].is_array()) fail(line_no, field, "expected array");
      std::vector<double> w;
      for (const json& x : jw[l]) w.push_back(as_double(x, line_no, field));
      p.user_weights.push_back(std::move(w));
    }
    payload = std::move(p);
  } else if (kind == "adwords") {
    AdwordsPayload p;
    const json& jb = require(jp, "budgets", line_no, "payload.");
    if (!jb.is_array()) fail(line_no, "payload.budgets", "expected array");
    for (const json& x : jb) p.budgets.push_back(as_double(x, line_no, "payload.budgets"));
    payload = std::move(p);
  } else {
    fail(line_no, "payload.kind", "unknown kind '" + kind + "'");
  }

  InstanceMeta meta;
  if (j.contains("meta") && j.at("meta").is_object()) {
    const json& jm = j.at("meta");
    if (jm.contains("generator") && jm.at("generator").is_string()) {
      meta.generator = jm.at("generator").get<std::string>();
    }
    if (jm.contains("seed") && jm.at("seed").is_number_unsigned()) {
      meta.seed = jm.at("seed").get<std::uint64_t>();
    }
    if (jm.contains("params") && jm.at("params").is_object()) {
      for (const auto& [k, v] : jm.at("params").items()) {
        meta.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
  }

  BipartiteInstance instance(u_count, std::move(arrivals), std::move(payload), std::move(meta));
  auto violations = validate(instance);
  if (!violations.empty()) {
    fail(line_no, violations.front().location, violations.front().message);
  }
  return instance;
}

std::string encode_dataset(const Dataset& instances) {
  std::string out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto& first = instances.front();
    if (inst.kind() != first.kind()) {
      throw ValidationError("instance " + std::to_string(i) + ": payload kind " +
                            to_string(inst.kind()) + " differs from " + to_string(first.kind()));
    }
    if (inst.u_count() != first.u_count() || inst.horizon() != first.horizon()) {
      throw ValidationError("instance " + std::to_string(i) + ": size differs from instance 0");
    }
    out += encode_instance(inst);
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& instances, const std::filesystem::path& path) {
  write_file_atomic(path, encode_dataset(instances));
}

Dataset decode_dataset(std::string_view text) {
  Dataset out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    out.push_back(decode_instance(line, line_no));
  }
  return out;
}

Dataset read_dataset(const std::filesystem::path& path) { return decode_dataset(read_file(path)); }

}  // namespace matchlab
