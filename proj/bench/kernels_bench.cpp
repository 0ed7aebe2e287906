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
// Wall-clock comparison of the serial and OpenMP kernels on a synthetic
// corpus. Usage: refprior_bench [scenes] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <vector>

#include "refprior/kernels.hpp"
#include "refprior/synthbench.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double BestMillis(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    f();
    const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
    if (dt.count() < best) best = dt.count();
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace refprior;
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

  SceneSpec spec;
  spec.seed = 11;
  spec.max_objects = 8;
  const auto scenes = Generate(spec, n);
  std::vector<Sample> samples;
  std::vector<std::optional<RelevanceGrid>> grids;
  for (const auto& s : scenes) {
    samples.push_back(s.sample);
    grids.emplace_back(s.grid);
  }
  const PriorConfig config;
  const auto net = FusionNet::Random(3);
  ScoreOptions options{PredictMode::kLearned, &net, 0};

  std::vector<PriorBundle> bundles;
  const double bs = BestMillis(repeats, [&] {
    bundles = serial::ComputeBundles(samples, grids, config);
  });
  const double bp = BestMillis(repeats, [&] {
    bundles = parallel::ComputeBundles(samples, grids, config);
  });
  std::vector<Prediction> preds;
  const double ss = BestMillis(repeats, [&] { preds = serial::Score(samples, bundles, options); });
  const double sp = BestMillis(repeats, [&] { preds = parallel::Score(samples, bundles, options); });

  std::printf("scenes=%zu threads=%d repeats=%d\n", n, MaxThreads(), repeats);
  std::printf("%-16s %12s %12s %8s\n", "kernel", "serial_ms", "parallel_ms", "speedup");
  std::printf("%-16s %12.3f %12.3f %8.2f\n", "ComputeBundles", bs, bp, bs / bp);
  std::printf("%-16s %12.3f %12.3f %8.2f\n", "Score", ss, sp, ss / sp);
  return 0;
}
