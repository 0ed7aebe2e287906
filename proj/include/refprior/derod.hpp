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
#ifndef REFPRIOR_DEROD_HPP_
#define REFPRIOR_DEROD_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace refprior {

// Fractions of the dataset, strictly increasing, in (0, 1].
struct LowDataSpec {
  std::vector<double> percentages{0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
};

// Support sets come only from support_categories, novel fine-tuning sets
// only from the remaining categories. Sizes within a family are strictly
// increasing and nested.
struct FewShotSpec {
  std::set<std::string> support_categories{"person"};
  std::vector<std::size_t> support_sizes{1000, 2000};
  std::vector<std::size_t> novel_sizes{500, 1000, 2000};
};

using SplitSpec = std::variant<LowDataSpec, FewShotSpec>;

// Throws Error(kInvalidSpec) when the ordering or range rules are broken.
void ValidateSpec(const SplitSpec& spec);

// Canonical JSON text of a spec, also the input to the manifest hash.
std::string SpecToJson(const SplitSpec& spec);
SplitSpec SpecFromJson(const std::string& text);

struct SplitManifest {
  std::string mode;  // "lowdata" or "fewshot"
  std::uint64_t seed = 0;
  std::string spec_json;
  std::string spec_hash;  // FNV-1a 64 of spec_json, hex
  std::vector<std::pair<std::string, std::vector<std::string>>> splits;

  const std::vector<std::string>* Find(const std::string& name) const;

  std::string ToJson() const;
  static SplitManifest FromJson(const std::string& text);
};

// max(1, round(fraction * n)), never above n.
std::size_t SplitCount(double fraction, std::size_t n);

// "0.1%", "5%", ...
std::string PercentName(double fraction);

// One seeded permutation of ids; each split is a prefix of it. Throws
// Error(kEmptyDataset) for no ids and Error(kDuplicateId) for repeats.
SplitManifest SampleLowData(std::span<const std::string> ids,
                            const LowDataSpec& spec, std::uint64_t seed);

struct LabeledId {
  std::string id;
  std::string category;
};

// Throws Error(kInsufficientPool) when a pool is empty or smaller than the
// largest requested size.
SplitManifest SampleFewShot(std::span<const LabeledId> samples,
                            const FewShotSpec& spec, std::uint64_t seed);

SplitManifest SampleSplits(std::span<const LabeledId> samples, const SplitSpec& spec,
                     std::uint64_t seed);

}  // namespace refprior

#endif  // REFPRIOR_DEROD_HPP_
