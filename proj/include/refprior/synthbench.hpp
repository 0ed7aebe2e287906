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
#ifndef REFPRIOR_SYNTHBENCH_HPP_
#define REFPRIOR_SYNTHBENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "refprior/phrase.hpp"
#include "refprior/priors.hpp"
#include "refprior/sample.hpp"

namespace refprior {

// Knobs for the synthetic desk-scale corpus. Ambiguous scenes hold several
// objects of the referred class and colour, so only a spatial term (and,
// with probability fidelity, the relevance map) singles out the target.
struct SceneSpec {
  int min_objects = 2;
  int max_objects = 5;
  std::vector<std::string> colors{"red", "blue", "green", "yellow"};
  std::vector<std::string> classes{"cup", "chair", "dog", "person", "book"};
  double ambiguity_rate = 0.5;
  int max_same_class = 2;    // upper bound on the ambiguous group size
  double composite_rate = 0.3;  // share of ambiguous phrases with a composite
  double detector_noise = 0.05;
  double fidelity = 0.9;
  int grid_resolution = 32;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidSpec).
  void Validate() const;

  std::string ToJson() const;
  // Missing keys keep their defaults.
  static SceneSpec FromJson(const std::string& text);
};

struct GeneratedScene {
  Sample sample;
  RelevanceGrid grid{1, 1, {0.0}};
  std::vector<SpatialTerm> embedded_terms;
  std::size_t target = 0;  // index of the candidate covering the referent
};

std::vector<GeneratedScene> Generate(const SceneSpec& spec, std::size_t n_scenes);

// Top-1 hit: the chosen candidate overlaps ground truth at IoU >= 0.5.
inline constexpr double kTop1IouThreshold = 0.5;
bool IsHit(const Sample& sample, std::size_t candidate);

struct AccuracyBucket {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

struct EvalReport {
  AccuracyBucket overall;
  AccuracyBucket ambiguous;
  AccuracyBucket unambiguous;

  double accuracy() const { return overall.accuracy(); }
  std::string ToJson() const;
};

// Throws Error(kMissingPrediction) when a sample has no prediction or its
// index is out of range.
EvalReport Evaluate(std::span<const Sample> samples,
                    const std::map<std::string, std::size_t>& predictions);

// Index of the candidate with the highest IoU against ground truth.
std::size_t OraclePrediction(const Sample& sample);

// Argmax of detector scores, ties to the lower index.
std::size_t DetectorOnlyPrediction(const Sample& sample);

}  // namespace refprior

#endif  // REFPRIOR_SYNTHBENCH_HPP_
