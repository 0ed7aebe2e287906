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
#include "refprior/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "refprior/error.hpp"

namespace refprior {

void LossWeights::Validate() const {
  for (double w : {cls, l1, giou, conf, prior}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::kInvalidSpec,
                  "loss weights must be finite and non-negative");
    }
  }
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      total_(rows * cols, 0.0),
      cls_(rows * cols, 0.0),
      l1_(rows * cols, 0.0),
      giou_(rows * cols, 0.0),
      prior_(rows * cols, 0.0) {}

CostMatrix CostMatrix::FromTotals(std::size_t rows, std::size_t cols,
                                  std::span<const double> totals) {
  if (totals.size() != rows * cols) {
    throw Error(ErrorKind::kLengthMismatch, "cost matrix size mismatch");
  }
  CostMatrix m(rows, cols);
  std::copy(totals.begin(), totals.end(), m.total_.begin());
  return m;
}

void CostMatrix::Set(std::size_t r, std::size_t c, double cls, double l1,
                     double giou, double prior, const LossWeights& w) {
  const std::size_t i = Index(r, c);
  cls_[i] = cls;
  l1_[i] = l1;
  giou_[i] = giou;
  prior_[i] = prior;
  total_[i] = cls + w.l1 * l1 + w.giou * giou - w.prior * prior;
}

CostMatrix BuildCost(std::span<const Candidate> candidates,
                     std::span<const Box> ground_truth,
                     const PriorBundle& bundle, const LossWeights& weights) {
  weights.Validate();
  if (bundle.size() != candidates.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "bundle and candidate list differ in length");
  }
  CostMatrix m(candidates.size(), ground_truth.size());
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    const Box& box = candidates[r].box;
    for (std::size_t c = 0; c < ground_truth.size(); ++c) {
      m.Set(r, c, 1.0 - bundle.p[r], L1Distance(box, ground_truth[c]),
            1.0 - Giou(box, ground_truth[c]), bundle.h[r], weights);
    }
  }
  return m;
}

CostMatrix BuildCost(const Sample& sample, const PriorBundle& bundle,
                     const LossWeights& weights) {
  return BuildCost(sample.candidates, std::span<const Box>(&sample.gt, 1),
                   bundle, weights);
}

namespace {

// Square O(n^3) shortest augmenting path solver with row/column potentials.
// Leaves an optimal matching in row_of_col and an optimal dual in u, v.
struct SquareSolver {
  explicit SquareSolver(std::size_t n, std::vector<double> a)
      : n(n), a(std::move(a)), u(n + 1, 0.0), v(n + 1, 0.0),
        row_of_col(n + 1, 0) {}

  double At(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  void Solve() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> way(n + 1, 0);
    // 1-based, column 0 is the virtual source.
    for (std::size_t i = 1; i <= n; ++i) {
      row_of_col[0] = i;
      std::size_t j0 = 0;
      std::vector<double> minv(n + 1, inf);
      std::vector<char> used(n + 1, 0);
      do {
        used[j0] = 1;
        const std::size_t i0 = row_of_col[j0];
        double delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= n; ++j) {
          if (used[j]) continue;
          const double cur = At(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n; ++j) {
          if (used[j]) {
            u[row_of_col[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (row_of_col[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        row_of_col[j0] = row_of_col[j1];
        j0 = j1;
      } while (j0 != 0);
    }
  }

  std::size_t n;
  std::vector<double> a;
  std::vector<double> u, v;
  std::vector<std::size_t> row_of_col;
};

// Walks the equality graph toward lexicographically smallest optimal
// matching. All indices are 0-based here.
class TieBreaker {
 public:
  TieBreaker(const SquareSolver& s, double tol)
      : solver_(s), n_(s.n), tol_(tol), col_of_row_(n_), row_of_col_(n_),
        row_forced_(n_, 0), col_forced_(n_, 0) {
    for (std::size_t j = 1; j <= n_; ++j) {
      row_of_col_[j - 1] = s.row_of_col[j] - 1;
      col_of_row_[s.row_of_col[j] - 1] = j - 1;
    }
  }

  bool Tight(std::size_t r, std::size_t c) const {
    return solver_.At(r, c) - solver_.u[r + 1] - solver_.v[c + 1] <= tol_;
  }

  // Forces (r, c) into the matching if some optimal matching holds it
  // together with everything forced so far.
  bool TryForce(std::size_t r, std::size_t c) {
    if (row_forced_[r] || col_forced_[c] || !Tight(r, c)) return false;
    if (col_of_row_[r] != c) {
      const std::size_t freed_col = col_of_row_[r];
      const std::size_t freed_row = row_of_col_[c];
      std::vector<char> seen(n_, 0);
      seen[c] = 1;
      std::vector<std::size_t> path;
      if (!Augment(freed_row, freed_col, r, seen, path)) return false;
      // path holds alternating (row, col) pairs to match.
      for (std::size_t k = 0; k + 1 < path.size(); k += 2) {
        col_of_row_[path[k]] = path[k + 1];
        row_of_col_[path[k + 1]] = path[k];
      }
      col_of_row_[r] = c;
      row_of_col_[c] = r;
    }
    row_forced_[r] = 1;
    col_forced_[c] = 1;
    return true;
  }

  std::size_t col_of_row(std::size_t r) const { return col_of_row_[r]; }
  std::size_t row_of_col(std::size_t c) const { return row_of_col_[c]; }

 private:
  // Alternating path from row to target column avoiding forced vertices,
  // the fixed row 'skip_row' and seen columns.
  bool Augment(std::size_t row, std::size_t target, std::size_t skip_row,
               std::vector<char>& seen, std::vector<std::size_t>& path) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (seen[c] || col_forced_[c] || !Tight(row, c)) continue;
      seen[c] = 1;
      if (c == target) {
        path.push_back(row);
        path.push_back(c);
        return true;
      }
      const std::size_t next = row_of_col_[c];
      if (next == skip_row || row_forced_[next]) continue;
      path.push_back(row);
      path.push_back(c);
      if (Augment(next, target, skip_row, seen, path)) return true;
      path.pop_back();
      path.pop_back();
    }
    return false;
  }

  const SquareSolver& solver_;
  std::size_t n_;
  double tol_;
  std::vector<std::size_t> col_of_row_, row_of_col_;
  std::vector<char> row_forced_, col_forced_;
};

}  // namespace

Assignment Hungarian(const CostMatrix& cost) {
  Assignment out;
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  if (rows == 0 || cols == 0) return out;

  double max_entry = -std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = cost.total(r, c);
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kInvalidSpec, "cost matrix has non-finite entries");
      }
      max_entry = std::max(max_entry, v);
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  const std::size_t n = std::max(rows, cols);
  const double pad = max_entry + 1.0;
  std::vector<double> square(n * n, pad);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) square[r * n + c] = cost.total(r, c);
  }
  SquareSolver solver(n, std::move(square));
  solver.Solve();

  TieBreaker ties(solver, 1e-9 * std::max(1.0, max_abs + 1.0));
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (ties.TryForce(r, c)) break;
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t r = ties.row_of_col(c);
    if (r >= rows) continue;
    out.pairs.emplace_back(r, c);
    out.total_cost += cost.total(r, c);
  }
  return out;
}

double BinaryCrossEntropy(double z, double label) {
  constexpr double kEps = 1e-12;
  const double zc = std::clamp(z, kEps, 1.0 - kEps);
  return -(label * std::log(zc) + (1.0 - label) * std::log(1.0 - zc));
}

LossReport ComputeLoss(std::span<const Candidate> candidates,
                       std::span<const Box> ground_truth,
                       const PriorBundle& bundle, const Assignment& assignment,
                       const LossWeights& weights,
                       std::span<const double> predicted_conf) {
  weights.Validate();
  const std::size_t n = candidates.size();
  if (bundle.size() != n || predicted_conf.size() != n) {
    throw Error(ErrorKind::kLengthMismatch,
                "candidates, bundle and confidences differ in length");
  }
  std::vector<double> label(n, 0.0);
  LossReport report;
  for (const auto& [r, c] : assignment.pairs) {
    if (r >= n || c >= ground_truth.size()) {
      throw Error(ErrorKind::kAssignmentMismatch,
                  "assignment pair (" + std::to_string(r) + ", " +
                      std::to_string(c) + ") out of range");
    }
    label[r] = 1.0;
    const Box& pred = candidates[r].box;
    const Box& gt = ground_truth[c];
    report.bbox += weights.l1 * L1Distance(pred, gt) +
                   weights.giou * (1.0 - Giou(pred, gt));
  }
  if (!ground_truth.empty()) report.bbox /= static_cast<double>(ground_truth.size());
  if (n > 0) {
    for (std::size_t j = 0; j < n; ++j) {
      report.cls += BinaryCrossEntropy(predicted_conf[j], label[j]);
      const double d = predicted_conf[j] - bundle.h[j];
      report.conf += d * d;
    }
    report.cls /= static_cast<double>(n);
    report.conf /= static_cast<double>(n);
  }
  report.total = weights.cls * report.cls + report.bbox + weights.conf * report.conf;
  return report;
}

LossReport ComputeLoss(const Sample& sample, const PriorBundle& bundle,
                       const Assignment& assignment, const LossWeights& weights,
                       std::span<const double> predicted_conf) {
  return ComputeLoss(sample.candidates, std::span<const Box>(&sample.gt, 1),
                     bundle, assignment, weights, predicted_conf);
}

}  // namespace refprior
