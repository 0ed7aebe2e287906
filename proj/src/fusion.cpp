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
#include "refprior/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "refprior/error.hpp"
#include "refprior/rng.hpp"

namespace refprior {

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

FusionNet FusionNet::Zero(double learning_rate) {
  FusionNet net;
  net.set_learning_rate(learning_rate);
  return net;
}

FusionNet FusionNet::Random(std::uint64_t seed, double learning_rate) {
  FusionNet net;
  net.seed_ = seed;
  net.set_learning_rate(learning_rate);
  SplitMix64 rng(seed);
  Params p;
  for (double& v : p) v = rng.Uniform(-0.5, 0.5);
  net.set_parameters(p);
  return net;
}

void FusionNet::set_learning_rate(double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw Error(ErrorKind::kInvalidSpec, "learning rate must be positive");
  }
  learning_rate_ = lr;
}

double FusionNet::Forward(const FusionInput& x) const {
  const std::array<double, kInputs> in{x.h_s, x.h_v, x.p};
  double logit = b2_;
  for (std::size_t k = 0; k < kHidden; ++k) {
    double pre = b1_[k];
    for (std::size_t i = 0; i < kInputs; ++i) pre += w1_[k * kInputs + i] * in[i];
    if (pre > 0.0) logit += w2_[k] * pre;
  }
  return Sigmoid(logit);
}

FusionNet::Gradients FusionNet::Backward(const FusionInput& x,
                                         double upstream) const {
  const std::array<double, kInputs> in{x.h_s, x.h_v, x.p};
  std::array<double, kHidden> pre{};
  double logit = b2_;
  for (std::size_t k = 0; k < kHidden; ++k) {
    pre[k] = b1_[k];
    for (std::size_t i = 0; i < kInputs; ++i) pre[k] += w1_[k * kInputs + i] * in[i];
    if (pre[k] > 0.0) logit += w2_[k] * pre[k];
  }
  const double z = Sigmoid(logit);
  const double d_logit = upstream * z * (1.0 - z);

  Gradients g;
  constexpr std::size_t kB1 = kHidden * kInputs;
  constexpr std::size_t kW2 = kB1 + kHidden;
  constexpr std::size_t kB2 = kW2 + kHidden;
  g.params[kB2] = d_logit;
  for (std::size_t k = 0; k < kHidden; ++k) {
    if (!(pre[k] > 0.0)) continue;  // dead unit
    g.params[kW2 + k] = d_logit * pre[k];
    const double d_pre = d_logit * w2_[k];
    g.params[kB1 + k] = d_pre;
    for (std::size_t i = 0; i < kInputs; ++i) {
      g.params[k * kInputs + i] = d_pre * in[i];
      g.inputs[i] += d_pre * w1_[k * kInputs + i];
    }
  }
  return g;
}

FusionNet::Params FusionNet::parameters() const {
  Params p{};
  auto out = std::copy(w1_.begin(), w1_.end(), p.begin());
  out = std::copy(b1_.begin(), b1_.end(), out);
  out = std::copy(w2_.begin(), w2_.end(), out);
  *out = b2_;
  return p;
}

void FusionNet::set_parameters(const Params& p) {
  auto in = p.begin();
  std::copy(in, in + w1_.size(), w1_.begin());
  in += w1_.size();
  std::copy(in, in + b1_.size(), b1_.begin());
  in += b1_.size();
  std::copy(in, in + w2_.size(), w2_.begin());
  in += w2_.size();
  b2_ = *in;
}

std::string FusionNet::ToJson() const {
  nlohmann::ordered_json j;
  j["layer_sizes"] = {kInputs, kHidden, 1};
  j["hidden_activation"] = "relu";
  j["output_activation"] = "sigmoid";
  j["weights"] = {std::vector<double>(w1_.begin(), w1_.end()),
                  std::vector<double>(w2_.begin(), w2_.end())};
  j["biases"] = {std::vector<double>(b1_.begin(), b1_.end()),
                 std::vector<double>{b2_}};
  j["seed"] = seed_;
  j["learning_rate"] = learning_rate_;
  return j.dump(2) + "\n";
}

FusionNet FusionNet::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    if (sizes != std::vector<std::size_t>{kInputs, kHidden, 1}) {
      throw Error(ErrorKind::kParseError, "fusion net must be 3-8-1");
    }
    const auto w1 = j.at("weights").at(0).get<std::vector<double>>();
    const auto w2 = j.at("weights").at(1).get<std::vector<double>>();
    const auto b1 = j.at("biases").at(0).get<std::vector<double>>();
    const auto b2 = j.at("biases").at(1).get<std::vector<double>>();
    if (w1.size() != kHidden * kInputs || w2.size() != kHidden ||
        b1.size() != kHidden || b2.size() != 1) {
      throw Error(ErrorKind::kParseError, "fusion net arrays have wrong sizes");
    }
    FusionNet net;
    std::copy(w1.begin(), w1.end(), net.w1_.begin());
    std::copy(w2.begin(), w2.end(), net.w2_.begin());
    std::copy(b1.begin(), b1.end(), net.b1_.begin());
    net.b2_ = b2[0];
    net.seed_ = j.value("seed", std::uint64_t{0});
    net.set_learning_rate(j.value("learning_rate", kDefaultLearningRate));
    for (double v : net.parameters()) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kParseError, "fusion net has non-finite weights");
      }
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("fusion net: ") + e.what());
  }
}

double AdditiveScore(const PriorBundle& bundle, std::size_t j) {
  return bundle.p[j] + bundle.h_s[j] + bundle.h_v[j];
}

std::vector<std::size_t> RankTopN(const PriorBundle& bundle, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::kInvalidSpec, "top-n requires n >= 1");
  std::vector<double> score(bundle.size());
  for (std::size_t j = 0; j < score.size(); ++j) score[j] = AdditiveScore(bundle, j);
  std::vector<std::size_t> order(bundle.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return a < b;
                    });
  order.resize(keep);
  return order;
}

namespace {

template <typename ScoreFn>
std::size_t ArgmaxOver(std::size_t size, std::span<const std::size_t> refs,
                       ScoreFn score) {
  if (size == 0) throw Error(ErrorKind::kEmptyCandidates, "no candidates");
  std::size_t best = 0;
  double best_score = 0.0;
  bool first = true;
  const auto visit = [&](std::size_t j) {
    if (j >= size) {
      throw Error(ErrorKind::kLengthMismatch, "reference index out of range");
    }
    const double s = score(j);
    if (first || s > best_score || (s == best_score && j < best)) {
      best = j;
      best_score = s;
      first = false;
    }
  };
  if (refs.empty()) {
    for (std::size_t j = 0; j < size; ++j) visit(j);
  } else {
    for (std::size_t j : refs) visit(j);
  }
  return best;
}

}  // namespace

std::size_t PredictZeroShot(const PriorBundle& bundle,
                            std::span<const std::size_t> refs) {
  return ArgmaxOver(bundle.size(), refs,
                    [&](std::size_t j) { return AdditiveScore(bundle, j); });
}

std::size_t PredictLearned(const PriorBundle& bundle, const FusionNet& net,
                           std::span<const std::size_t> refs) {
  return ArgmaxOver(bundle.size(), refs, [&](std::size_t j) {
    return net.Forward({bundle.h_s[j], bundle.h_v[j], bundle.p[j]});
  });
}

std::vector<double> FusionScores(const PriorBundle& bundle, const FusionNet& net) {
  std::vector<double> z(bundle.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    z[j] = net.Forward({bundle.h_s[j], bundle.h_v[j], bundle.p[j]});
  }
  return z;
}

namespace {

void CheckTrainingSet(std::span<const TrainingExample> dataset) {
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& ex = dataset[s];
    if (ex.bundle.size() == 0 || ex.positive >= ex.bundle.size()) {
      throw Error(ErrorKind::kNoPositives,
                  "training example " + std::to_string(s) +
                      " has no matched candidate");
    }
  }
}

// Objective and, when grad is non-null, its gradient.
double Evaluate(const FusionNet& net, std::span<const TrainingExample> dataset,
                const LossWeights& w, FusionNet::Params* grad) {
  if (grad) grad->fill(0.0);
  if (dataset.empty()) return 0.0;
  const double per_sample = 1.0 / static_cast<double>(dataset.size());
  double loss = 0.0;
  for (const auto& ex : dataset) {
    const auto& b = ex.bundle;
    const double scale = per_sample / static_cast<double>(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      const FusionInput x{b.h_s[j], b.h_v[j], b.p[j]};
      const double z = net.Forward(x);
      const double y = j == ex.positive ? 1.0 : 0.0;
      const double diff = z - b.h[j];
      loss += scale * (w.cls * BinaryCrossEntropy(z, y) + w.conf * diff * diff);
      if (!grad) continue;
      const double var = std::max(z * (1.0 - z), 1e-300);
      const double d_z = scale * (w.cls * (z - y) / var + 2.0 * w.conf * diff);
      const auto g = net.Backward(x, d_z);
      for (std::size_t k = 0; k < FusionNet::kParams; ++k) (*grad)[k] += g.params[k];
    }
  }
  return loss;
}

}  // namespace

double FusionObjective(const FusionNet& net,
                       std::span<const TrainingExample> dataset,
                       const LossWeights& weights) {
  CheckTrainingSet(dataset);
  return Evaluate(net, dataset, weights, nullptr);
}

TrainResult TrainFusion(const FusionNet& init,
                        std::span<const TrainingExample> dataset, int epochs,
                        const LossWeights& weights) {
  weights.Validate();
  CheckTrainingSet(dataset);
  TrainResult result{init, {}, 0.0};
  FusionNet& net = result.net;
  const double lr = net.learning_rate();
  FusionNet::Params grad;
  result.loss_trace.reserve(static_cast<std::size_t>(std::max(epochs, 0)));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    result.loss_trace.push_back(Evaluate(net, dataset, weights, &grad));
    auto params = net.parameters();
    for (std::size_t k = 0; k < FusionNet::kParams; ++k) params[k] -= lr * grad[k];
    net.set_parameters(params);
  }
  result.final_loss = Evaluate(net, dataset, weights, nullptr);
  return result;
}

}  // namespace refprior
