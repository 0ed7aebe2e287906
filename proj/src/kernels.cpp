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
#include "refprior/kernels.hpp"

#include <exception>

#include <omp.h>

#include "refprior/error.hpp"
#include "refprior/synthbench.hpp"

namespace refprior {

namespace {

void CheckAligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(ErrorKind::kLengthMismatch, what);
}

const RelevanceGrid* GridAt(std::span<const std::optional<RelevanceGrid>> grids,
                            std::size_t i) {
  return grids[i] ? &*grids[i] : nullptr;
}

Prediction ScoreOne(const Sample& sample, const PriorBundle& bundle,
                    const ScoreOptions& options) {
  std::vector<std::size_t> refs;
  if (options.top_n > 0) refs = RankTopN(bundle, options.top_n);
  Prediction p;
  p.id = sample.id;
  if (options.mode == PredictMode::kLearned) {
    p.index = PredictLearned(bundle, *options.net, refs);
    p.score = options.net->Forward(
        {bundle.h_s[p.index], bundle.h_v[p.index], bundle.p[p.index]});
  } else {
    p.index = PredictZeroShot(bundle, refs);
    p.score = AdditiveScore(bundle, p.index);
  }
  return p;
}

void CheckOptions(const ScoreOptions& options) {
  if (options.mode == PredictMode::kLearned && options.net == nullptr) {
    throw Error(ErrorKind::kUsage, "learned scoring needs a fusion net");
  }
}

// Runs body(i) for i in [0, n) across threads; the first exception thrown
// by any iteration is rethrown on the calling thread.
template <typename Body>
void ParallelFor(std::size_t n, Body body) {
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(refprior_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int MaxThreads() { return omp_get_max_threads(); }

namespace serial {

std::vector<PriorBundle> ComputeBundles(
    std::span<const Sample> samples,
    std::span<const std::optional<RelevanceGrid>> grids,
    const PriorConfig& config) {
  CheckAligned(samples.size(), grids.size(), "samples and grids differ in length");
  std::vector<PriorBundle> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(ComputeBundle(samples[i], GridAt(grids, i), config));
  }
  return out;
}

std::vector<Prediction> Score(std::span<const Sample> samples,
                              std::span<const PriorBundle> bundles,
                              const ScoreOptions& options) {
  CheckAligned(samples.size(), bundles.size(), "samples and bundles differ in length");
  CheckOptions(options);
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.push_back(ScoreOne(samples[i], bundles[i], options));
  }
  return out;
}

std::size_t CountHits(std::span<const Sample> samples,
                      std::span<const std::size_t> choices) {
  CheckAligned(samples.size(), choices.size(), "samples and choices differ in length");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (IsHit(samples[i], choices[i])) ++hits;
  }
  return hits;
}

}  // namespace serial

namespace parallel {

std::vector<PriorBundle> ComputeBundles(
    std::span<const Sample> samples,
    std::span<const std::optional<RelevanceGrid>> grids,
    const PriorConfig& config) {
  CheckAligned(samples.size(), grids.size(), "samples and grids differ in length");
  std::vector<PriorBundle> out(samples.size());
  ParallelFor(samples.size(), [&](std::size_t i) {
    out[i] = ComputeBundle(samples[i], GridAt(grids, i), config);
  });
  return out;
}

std::vector<Prediction> Score(std::span<const Sample> samples,
                              std::span<const PriorBundle> bundles,
                              const ScoreOptions& options) {
  CheckAligned(samples.size(), bundles.size(), "samples and bundles differ in length");
  CheckOptions(options);
  std::vector<Prediction> out(samples.size());
  ParallelFor(samples.size(), [&](std::size_t i) {
    out[i] = ScoreOne(samples[i], bundles[i], options);
  });
  return out;
}

std::size_t CountHits(std::span<const Sample> samples,
                      std::span<const std::size_t> choices) {
  CheckAligned(samples.size(), choices.size(), "samples and choices differ in length");
  const auto n = static_cast<long long>(samples.size());
  long long hits = 0;
#pragma omp parallel for reduction(+ : hits)
  for (long long i = 0; i < n; ++i) {
    if (IsHit(samples[i], choices[i])) ++hits;
  }
  return static_cast<std::size_t>(hits);
}

}  // namespace parallel

}  // namespace refprior
