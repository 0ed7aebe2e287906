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
#ifndef REFPRIOR_KERNELS_HPP_
#define REFPRIOR_KERNELS_HPP_

// Batch kernels over whole corpora. refprior::serial holds the plain loops
// the parallel versions are tested against; refprior::parallel distributes
// samples over OpenMP threads. Both produce bit-identical results because
// each sample is processed independently and in the same order internally.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "refprior/dataset_io.hpp"
#include "refprior/fusion.hpp"
#include "refprior/priors.hpp"
#include "refprior/sample.hpp"

namespace refprior {

struct ScoreOptions {
  PredictMode mode = PredictMode::kZeroShot;
  const FusionNet* net = nullptr;  // required for kLearned
  std::size_t top_n = 0;           // reference set size; 0 keeps all
};

namespace serial {

std::vector<PriorBundle> ComputeBundles(
    std::span<const Sample> samples,
    std::span<const std::optional<RelevanceGrid>> grids,
    const PriorConfig& config);

std::vector<Prediction> Score(std::span<const Sample> samples,
                              std::span<const PriorBundle> bundles,
                              const ScoreOptions& options);

std::size_t CountHits(std::span<const Sample> samples,
                      std::span<const std::size_t> choices);

}  // namespace serial

namespace parallel {

std::vector<PriorBundle> ComputeBundles(
    std::span<const Sample> samples,
    std::span<const std::optional<RelevanceGrid>> grids,
    const PriorConfig& config);

std::vector<Prediction> Score(std::span<const Sample> samples,
                              std::span<const PriorBundle> bundles,
                              const ScoreOptions& options);

std::size_t CountHits(std::span<const Sample> samples,
                      std::span<const std::size_t> choices);

}  // namespace parallel

// Number of OpenMP threads parallel kernels will use.
int MaxThreads();

}  // namespace refprior

#endif  // REFPRIOR_KERNELS_HPP_
