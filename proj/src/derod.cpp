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
#include "refprior/derod.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "json.hpp"
#include "refprior/error.hpp"
#include "refprior/rng.hpp"

namespace refprior {

namespace {

template <typename T>
void RequireStrictlyIncreasing(const std::vector<T>& values, const char* what) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidSpec, std::string(what) + " is empty");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) {
      throw Error(ErrorKind::kInvalidSpec,
                  std::string(what) + " must be strictly increasing");
    }
  }
}

std::string Fnv1aHex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SplitManifest NewManifest(const SplitSpec& spec, std::uint64_t seed) {
  SplitManifest m;
  m.mode = std::holds_alternative<LowDataSpec>(spec) ? "lowdata" : "fewshot";
  m.seed = seed;
  m.spec_json = SpecToJson(spec);
  m.spec_hash = Fnv1aHex(m.spec_json);
  return m;
}

}  // namespace

void ValidateSpec(const SplitSpec& spec) {
  if (const auto* low = std::get_if<LowDataSpec>(&spec)) {
    RequireStrictlyIncreasing(low->percentages, "percentages");
    if (!(low->percentages.front() > 0.0) || low->percentages.back() > 1.0) {
      throw Error(ErrorKind::kInvalidSpec, "percentages must lie in (0, 1]");
    }
    return;
  }
  const auto& few = std::get<FewShotSpec>(spec);
  if (few.support_categories.empty()) {
    throw Error(ErrorKind::kInvalidSpec, "support_categories is empty");
  }
  RequireStrictlyIncreasing(few.support_sizes, "support_sizes");
  RequireStrictlyIncreasing(few.novel_sizes, "novel_sizes");
  if (few.support_sizes.front() == 0 || few.novel_sizes.front() == 0) {
    throw Error(ErrorKind::kInvalidSpec, "split sizes must be positive");
  }
}

std::string SpecToJson(const SplitSpec& spec) {
  nlohmann::ordered_json j;
  if (const auto* low = std::get_if<LowDataSpec>(&spec)) {
    j["mode"] = "lowdata";
    j["percentages"] = low->percentages;
  } else {
    const auto& few = std::get<FewShotSpec>(spec);
    j["mode"] = "fewshot";
    j["support_categories"] = few.support_categories;
    j["support_sizes"] = few.support_sizes;
    j["novel_sizes"] = few.novel_sizes;
  }
  return j.dump();
}

SplitSpec SpecFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string mode = j.at("mode").get<std::string>();
    SplitSpec spec;
    if (mode == "lowdata") {
      LowDataSpec low;
      if (j.contains("percentages"))
        low.percentages = j["percentages"].get<std::vector<double>>();
      spec = low;
    } else if (mode == "fewshot") {
      FewShotSpec few;
      if (j.contains("support_categories"))
        few.support_categories = j["support_categories"].get<std::set<std::string>>();
      if (j.contains("support_size")) {
        few.support_sizes = {j["support_size"].get<std::size_t>()};
      } else if (j.contains("support_sizes")) {
        few.support_sizes = j["support_sizes"].get<std::vector<std::size_t>>();
      }
      if (j.contains("novel_sizes"))
        few.novel_sizes = j["novel_sizes"].get<std::vector<std::size_t>>();
      spec = few;
    } else {
      throw Error(ErrorKind::kInvalidSpec, "unknown split mode '" + mode + "'");
    }
    ValidateSpec(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("split spec: ") + e.what());
  }
}

const std::vector<std::string>* SplitManifest::Find(const std::string& name) const {
  for (const auto& [n, ids] : splits) {
    if (n == name) return &ids;
  }
  return nullptr;
}

std::string SplitManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["seed"] = seed;
  j["spec"] = nlohmann::ordered_json::parse(spec_json);
  j["spec_hash"] = spec_hash;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [name, ids] : splits) s[name] = ids;
  j["splits"] = s;
  return j.dump(2) + "\n";
}

SplitManifest SplitManifest::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    SplitManifest m;
    m.mode = j.at("mode").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.spec_json = j.at("spec").dump();
    m.spec_hash = j.value("spec_hash", std::string());
    for (const auto& [name, ids] : j.at("splits").items()) {
      m.splits.emplace_back(name, ids.get<std::vector<std::string>>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("manifest: ") + e.what());
  }
}

std::size_t SplitCount(double fraction, std::size_t n) {
  const auto rounded = std::llround(fraction * static_cast<double>(n));
  const std::size_t count = rounded < 1 ? 1 : static_cast<std::size_t>(rounded);
  return std::min(count, n);
}

std::string PercentName(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g%%", fraction * 100.0);
  return buf;
}

SplitManifest SampleLowData(std::span<const std::string> ids,
                            const LowDataSpec& spec, std::uint64_t seed) {
  ValidateSpec(spec);
  if (ids.empty()) throw Error(ErrorKind::kEmptyDataset, "no sample ids");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::kDuplicateId, "duplicate sample id '" + id + "'");
    }
  }
  std::vector<std::string> order(ids.begin(), ids.end());
  SplitMix64 rng(seed);
  rng.Shuffle(std::span<std::string>(order));

  SplitManifest m = NewManifest(spec, seed);
  for (double p : spec.percentages) {
    const std::size_t k = SplitCount(p, order.size());
    m.splits.emplace_back(PercentName(p),
                          std::vector<std::string>(order.begin(), order.begin() + k));
  }
  return m;
}

SplitManifest SampleFewShot(std::span<const LabeledId> samples,
                            const FewShotSpec& spec, std::uint64_t seed) {
  ValidateSpec(spec);
  std::vector<std::string> support, novel;
  std::unordered_set<std::string> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.id).second) {
      throw Error(ErrorKind::kDuplicateId, "duplicate sample id '" + s.id + "'");
    }
    (spec.support_categories.count(s.category) ? support : novel).push_back(s.id);
  }
  const auto check_pool = [](const std::vector<std::string>& pool,
                             std::size_t need, const char* name) {
    if (pool.empty() || pool.size() < need) {
      throw Error(ErrorKind::kInsufficientPool,
                  std::string(name) + " pool has " + std::to_string(pool.size()) +
                      " samples, " + std::to_string(need) + " requested");
    }
  };
  check_pool(support, spec.support_sizes.back(), "support");
  check_pool(novel, spec.novel_sizes.back(), "novel");

  SplitMix64 rng(seed);
  rng.Shuffle(std::span<std::string>(support));
  rng.Shuffle(std::span<std::string>(novel));

  SplitManifest m = NewManifest(spec, seed);
  for (std::size_t k : spec.support_sizes) {
    m.splits.emplace_back("support_" + std::to_string(k),
                          std::vector<std::string>(support.begin(), support.begin() + k));
  }
  for (std::size_t k : spec.novel_sizes) {
    m.splits.emplace_back("novel_" + std::to_string(k),
                          std::vector<std::string>(novel.begin(), novel.begin() + k));
  }
  return m;
}

SplitManifest SampleSplits(std::span<const LabeledId> samples, const SplitSpec& spec,
                     std::uint64_t seed) {
  if (const auto* low = std::get_if<LowDataSpec>(&spec)) {
    std::vector<std::string> ids;
    ids.reserve(samples.size());
    for (const auto& s : samples) ids.push_back(s.id);
    return SampleLowData(ids, *low, seed);
  }
  return SampleFewShot(samples, std::get<FewShotSpec>(spec), seed);
}

}  // namespace refprior
