/* Copyright 2026 The refprior Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "refprior/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "refprior/error.hpp"

namespace refprior {

namespace {

using nlohmann::json;

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": " + what);
}

bool Blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

Box ParseBox(const json& j, BoxFormat format, int w, int h) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4) throw Error(ErrorKind::kInvalidBox, "box needs 4 numbers");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kInvalidBox, "non-finite box");
  }
  if (format == BoxFormat::kXywhPixel) return FromPixelXywh(v[0], v[1], v[2], v[3], w, h);
  return Validated(Box{v[0], v[1], v[2], v[3]});
}

Sample ParseSampleObject(const json& j, BoxFormat format) {
  Sample s;
  s.id = j.at("id").get<std::string>();
  s.width = j.at("w").get<int>();
  s.height = j.at("h").get<int>();
  if (s.width < 1 || s.height < 1) {
    throw Error(ErrorKind::kInvalidSample, "image size must be positive");
  }
  s.phrase = j.at("phrase").get<std::string>();
  s.category = j.value("category", std::string());
  s.ambiguous = j.value("ambiguous", false);
  s.gt = ParseBox(j.at("gt"), format, s.width, s.height);
  if (!(Area(s.gt) > 0.0)) {
    throw Error(ErrorKind::kInvalidSample, "ground truth box has zero area");
  }
  for (const auto& c : j.at("candidates")) {
    Candidate cand;
    cand.box = ParseBox(c.at("box"), format, s.width, s.height);
    cand.score = c.at("score").get<double>();
    if (!std::isfinite(cand.score) || cand.score < 0.0 || cand.score > 1.0) {
      throw Error(ErrorKind::kInvalidSample, "candidate score outside [0,1]");
    }
    s.candidates.push_back(cand);
  }
  if (s.candidates.empty()) {
    throw Error(ErrorKind::kInvalidSample, "sample has no candidates");
  }
  return s;
}

json BoxJson(const Box& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

}  // namespace

std::vector<Sample> ParseSamples(std::istream& in) {
  std::vector<Sample> samples;
  std::unordered_set<std::string> seen;
  BoxFormat format = BoxFormat::kXywhPixel;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      ParseFail(line_no, e.what());
    }
    if (first_record && j.is_object() && j.contains("header")) {
      first_record = false;
      const std::string f = j["header"].value("box_format", std::string("xywh_pixel"));
      if (f == "xyxy_norm") {
        format = BoxFormat::kXyxyNorm;
      } else if (f != "xywh_pixel") {
        ParseFail(line_no, "unknown box_format '" + f + "'");
      }
      continue;
    }
    first_record = false;
    Sample s;
    try {
      s = ParseSampleObject(j, format);
    } catch (const json::exception& e) {
      ParseFail(line_no, e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(s.id).second) {
      throw Error(ErrorKind::kDuplicateId, "line " + std::to_string(line_no) +
                                               ": duplicate id '" + s.id + "'");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<RelmapRecord> ParseRelmaps(std::istream& in) {
  std::vector<RelmapRecord> maps;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    std::string id;
    int w = 0, h = 0;
    std::vector<double> values;
    try {
      const json j = json::parse(line);
      id = j.at("id").get<std::string>();
      w = j.at("w").get<int>();
      h = j.at("h").get<int>();
      values = j.at("values").get<std::vector<double>>();
    } catch (const json::exception& e) {
      ParseFail(line_no, e.what());
    }
    if (w < 1 || h < 1 ||
        values.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "relmap '" + id + "' has " + std::to_string(values.size()) +
                      " values for " + std::to_string(w) + "x" + std::to_string(h));
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::kDuplicateId, "line " + std::to_string(line_no) +
                                               ": duplicate relmap id '" + id + "'");
    }
    maps.push_back({id, RelevanceGrid(w, h, std::move(values))});
  }
  return maps;
}

Dataset Join(std::vector<Sample> samples, std::vector<RelmapRecord> relmaps) {
  Dataset ds;
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < relmaps.size(); ++i) {
    by_id.emplace(relmaps[i].id, i);
    ds.clamped_values += relmaps[i].grid.clamped_count();
  }
  std::size_t used = 0;
  ds.grids.reserve(samples.size());
  for (const Sample& s : samples) {
    const auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      ds.grids.emplace_back(std::nullopt);
      ++ds.missing_relmaps;
    } else {
      ds.grids.emplace_back(std::move(relmaps[it->second].grid));
      ++used;
    }
  }
  ds.orphan_relmaps = relmaps.size() - used;
  ds.samples = std::move(samples);
  return ds;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Dataset Ingest(const std::string& samples_path,
               const std::optional<std::string>& relmaps_path) {
  std::istringstream samples_in(ReadFile(samples_path));
  auto samples = ParseSamples(samples_in);
  std::vector<RelmapRecord> maps;
  if (relmaps_path) {
    std::istringstream maps_in(ReadFile(*relmaps_path));
    maps = ParseRelmaps(maps_in);
  }
  return Join(std::move(samples), std::move(maps));
}

std::string SamplesToJsonl(std::span<const Sample> samples) {
  std::string out = json{{"header", {{"box_format", "xyxy_norm"}}}}.dump() + "\n";
  for (const Sample& s : samples) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["w"] = s.width;
    j["h"] = s.height;
    j["phrase"] = s.phrase;
    j["gt"] = BoxJson(s.gt);
    j["category"] = s.category;
    j["ambiguous"] = s.ambiguous;
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const Candidate& c : s.candidates) {
      nlohmann::ordered_json cj;
      cj["box"] = BoxJson(c.box);
      cj["score"] = c.score;
      cands.push_back(cj);
    }
    j["candidates"] = cands;
    out += j.dump() + "\n";
  }
  return out;
}

std::string RelmapsToJsonl(std::span<const std::string> ids,
                           std::span<const RelevanceGrid* const> grids) {
  if (ids.size() != grids.size()) {
    throw Error(ErrorKind::kLengthMismatch, "relmap ids and grids differ in length");
  }
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nlohmann::ordered_json j;
    j["id"] = ids[i];
    j["w"] = grids[i]->width();
    j["h"] = grids[i]->height();
    const auto v = grids[i]->values();
    j["values"] = std::vector<double>(v.begin(), v.end());
    out += j.dump() + "\n";
  }
  return out;
}

std::string PredictionsToJson(const std::string& mode,
                              std::span<const Prediction> predictions) {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& p : predictions) {
    nlohmann::ordered_json pj;
    pj["id"] = p.id;
    pj["index"] = p.index;
    pj["score"] = p.score;
    list.push_back(pj);
  }
  j["predictions"] = list;
  return j.dump(2) + "\n";
}

std::vector<Prediction> PredictionsFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    std::vector<Prediction> out;
    for (const auto& pj : j.at("predictions")) {
      out.push_back({pj.at("id").get<std::string>(), pj.at("index").get<std::size_t>(),
                     pj.value("score", 0.0)});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("predictions: ") + e.what());
  }
}

void WriteFilesAtomic(std::span<const std::pair<std::string, std::string>> files) {
  namespace fs = std::filesystem;
  std::vector<std::string> temps;
  const auto cleanup = [&temps] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    temps.push_back(tmp);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw Error(ErrorKind::kIoError, "cannot write " + path);
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorKind::kIoError, "cannot rename into " + files[i].first);
    }
  }
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::pair<std::string, std::string> file{path, content};
  WriteFilesAtomic(std::span(&file, 1));
}

}  // namespace refprior
