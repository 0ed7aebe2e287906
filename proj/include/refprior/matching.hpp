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
#ifndef REFPRIOR_MATCHING_HPP_
#define REFPRIOR_MATCHING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "refprior/geometry.hpp"
#include "refprior/priors.hpp"
#include "refprior/sample.hpp"

namespace refprior {

struct LossWeights {
  double cls = 1.0;
  double l1 = 5.0;
  double giou = 2.0;
  double conf = 1.0;
  double prior = 1.0;  // weight on the subtracted h in the matching cost

  // Throws Error(kInvalidSpec) if any weight is negative or non-finite.
  void Validate() const;
};

// Prediction x ground-truth matching cost with each component kept, so
//   total = cls + w.l1 * l1 + w.giou * giou - w.prior * prior
// can be recomputed per cell.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols);

  // Matrix with only a total, for solver use; components are zero.
  static CostMatrix FromTotals(std::size_t rows, std::size_t cols,
                               std::span<const double> totals);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double total(std::size_t r, std::size_t c) const { return total_[Index(r, c)]; }
  double cls(std::size_t r, std::size_t c) const { return cls_[Index(r, c)]; }
  double l1(std::size_t r, std::size_t c) const { return l1_[Index(r, c)]; }
  double giou(std::size_t r, std::size_t c) const { return giou_[Index(r, c)]; }
  double prior(std::size_t r, std::size_t c) const { return prior_[Index(r, c)]; }

  void Set(std::size_t r, std::size_t c, double cls, double l1, double giou,
           double prior, const LossWeights& w);
  void SetTotal(std::size_t r, std::size_t c, double total) {
    total_[Index(r, c)] = total;
  }

 private:
  std::size_t Index(std::size_t r, std::size_t c) const { return r * cols_ + c; }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> total_, cls_, l1_, giou_, prior_;
};

// Builds the prior-modified matching cost between every candidate and every
// ground-truth box: cls = 1 - p, l1 = sum of |coordinate differences|,
// giou = 1 - GIoU, prior = h of the candidate.
CostMatrix BuildCost(std::span<const Candidate> candidates,
                     std::span<const Box> ground_truth,
                     const PriorBundle& bundle, const LossWeights& weights);
CostMatrix BuildCost(const Sample& sample, const PriorBundle& bundle,
                     const LossWeights& weights);

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), by col
  double total_cost = 0.0;  // summed over pairs in order
};

// Minimum-cost one-to-one assignment of size min(rows, cols). Rectangular
// inputs are padded with a constant above every real entry. Among equal-cost
// optima the smallest pair sequence in (col, row) order is returned.
Assignment Hungarian(const CostMatrix& cost);

struct LossReport {
  double total = 0.0;
  double cls = 0.0;
  double bbox = 0.0;
  double conf = 0.0;
};

// Binary cross-entropy of z against matched/unmatched labels (mean over
// candidates), box loss over matched pairs (mean over ground truth) and the
// squared error of z against h (mean over candidates). Throws
// Error(kAssignmentMismatch) on out-of-range indices and
// Error(kLengthMismatch) if z and the bundle disagree.
LossReport ComputeLoss(std::span<const Candidate> candidates,
                       std::span<const Box> ground_truth,
                       const PriorBundle& bundle, const Assignment& assignment,
                       const LossWeights& weights,
                       std::span<const double> predicted_conf);
LossReport ComputeLoss(const Sample& sample, const PriorBundle& bundle,
                       const Assignment& assignment, const LossWeights& weights,
                       std::span<const double> predicted_conf);

// Clamped binary cross-entropy.
double BinaryCrossEntropy(double z, double label);

}  // namespace refprior

#endif  // REFPRIOR_MATCHING_HPP_
