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
#ifndef REFPRIOR_DATASET_IO_HPP_
#define REFPRIOR_DATASET_IO_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "refprior/priors.hpp"
#include "refprior/sample.hpp"

namespace refprior {

// Box convention of a samples file. Declared by an optional first line
// {"header": {"box_format": "xyxy_norm"}}; files without a header carry
// pixel [x, y, w, h] boxes.
enum class BoxFormat { kXywhPixel, kXyxyNorm };

struct Dataset {
  std::vector<Sample> samples;
  std::vector<std::optional<RelevanceGrid>> grids;  // aligned with samples
  std::size_t missing_relmaps = 0;  // samples falling back to neutral h_v
  std::size_t orphan_relmaps = 0;   // maps whose id has no sample
  std::size_t clamped_values = 0;   // relevance values pulled into [0,1]

  const RelevanceGrid* grid(std::size_t i) const {
    return grids[i] ? &*grids[i] : nullptr;
  }
};

// Errors: kParseError (with line number), kDuplicateId, kInvalidBox,
// kInvalidSample.
std::vector<Sample> ParseSamples(std::istream& in);

struct RelmapRecord {
  std::string id;
  RelevanceGrid grid;
};

// Errors: kParseError, kDuplicateId, kDimensionMismatch (naming the id).
std::vector<RelmapRecord> ParseRelmaps(std::istream& in);

// Joins maps to samples by id. Samples without a map count as missing.
Dataset Join(std::vector<Sample> samples, std::vector<RelmapRecord> relmaps);

Dataset Ingest(const std::string& samples_path,
               const std::optional<std::string>& relmaps_path);

// Writers emit xyxy_norm with a header line.
std::string SamplesToJsonl(std::span<const Sample> samples);
std::string RelmapsToJsonl(std::span<const std::string> ids,
                           std::span<const RelevanceGrid* const> grids);

struct Prediction {
  std::string id;
  std::size_t index = 0;
  double score = 0.0;
};

std::string PredictionsToJson(const std::string& mode,
                              std::span<const Prediction> predictions);
std::vector<Prediction> PredictionsFromJson(const std::string& text);

std::string ReadFile(const std::string& path);

// Writes every file to a temporary sibling, then renames them into place.
// Nothing is renamed unless all temporaries were written.
void WriteFilesAtomic(std::span<const std::pair<std::string, std::string>> files);
void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace refprior

#endif  // REFPRIOR_DATASET_IO_HPP_
