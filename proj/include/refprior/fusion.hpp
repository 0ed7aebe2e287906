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
#ifndef REFPRIOR_FUSION_HPP_
#define REFPRIOR_FUSION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "refprior/matching.hpp"
#include "refprior/priors.hpp"

namespace refprior {

struct FusionInput {
  double h_s = 0.0;
  double h_v = 0.0;
  double p = 0.0;
};

// 3 -> 8 -> 1 perceptron: ReLU hidden layer, logistic output.
// Flat parameter order: w1 (8x3, row-major), b1 (8), w2 (8), b2.
class FusionNet {
 public:
  static constexpr std::size_t kInputs = 3;
  static constexpr std::size_t kHidden = 8;
  static constexpr std::size_t kParams = kInputs * kHidden + kHidden + kHidden + 1;
  static constexpr double kDefaultLearningRate = 0.05;

  using Params = std::array<double, kParams>;

  struct Gradients {
    Params params{};
    std::array<double, kInputs> inputs{};
  };

  // All weights and biases zero.
  static FusionNet Zero(double learning_rate = kDefaultLearningRate);
  // Weights and biases uniform in [-0.5, 0.5) drawn from SplitMix64(seed).
  static FusionNet Random(std::uint64_t seed,
                          double learning_rate = kDefaultLearningRate);

  double Forward(const FusionInput& x) const;

  // Exact gradient of upstream * z with respect to every parameter and input.
  Gradients Backward(const FusionInput& x, double upstream) const;

  Params parameters() const;
  void set_parameters(const Params& params);

  std::uint64_t seed() const { return seed_; }
  double learning_rate() const { return learning_rate_; }
  void set_learning_rate(double lr);

  std::string ToJson() const;
  // Throws Error(kParseError) on malformed documents.
  static FusionNet FromJson(const std::string& text);

  friend bool operator==(const FusionNet&, const FusionNet&) = default;

 private:
  std::array<double, kHidden * kInputs> w1_{};
  std::array<double, kHidden> b1_{};
  std::array<double, kHidden> w2_{};
  double b2_ = 0.0;
  std::uint64_t seed_ = 0;
  double learning_rate_ = kDefaultLearningRate;
};

double Sigmoid(double x);

// Additive integration score p + h_s + h_v for candidate j.
double AdditiveScore(const PriorBundle& bundle, std::size_t j);

// Indices of the min(n, size) highest additive scores, descending, ties to
// the lower index. n must be >= 1.
std::vector<std::size_t> RankTopN(const PriorBundle& bundle, std::size_t n);

enum class PredictMode { kZeroShot, kLearned };

// Argmax of the additive score (zero-shot) or of the net output (learned),
// ties to the lower index. Restricts to refs when non-empty. Throws
// Error(kEmptyCandidates).
std::size_t PredictZeroShot(const PriorBundle& bundle,
                            std::span<const std::size_t> refs = {});
std::size_t PredictLearned(const PriorBundle& bundle, const FusionNet& net,
                           std::span<const std::size_t> refs = {});

std::vector<double> FusionScores(const PriorBundle& bundle, const FusionNet& net);

struct TrainingExample {
  PriorBundle bundle;
  std::size_t positive = 0;  // matched candidate index
};

struct TrainResult {
  FusionNet net;
  std::vector<double> loss_trace;  // objective before each update
  double final_loss = 0.0;
};

// Full-batch gradient descent at the net's learning rate on
//   mean_samples mean_candidates [w.cls * BCE(z, y) + w.conf * (z - h)^2]
// with y = 1 for the positive candidate. Throws Error(kNoPositives) if a
// positive index is out of range or a bundle is empty.
TrainResult TrainFusion(const FusionNet& init,
                        std::span<const TrainingExample> dataset, int epochs,
                        const LossWeights& weights = {});

double FusionObjective(const FusionNet& net,
                       std::span<const TrainingExample> dataset,
                       const LossWeights& weights = {});

}  // namespace refprior

#endif  // REFPRIOR_FUSION_HPP_
