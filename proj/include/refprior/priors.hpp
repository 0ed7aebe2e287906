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
#ifndef REFPRIOR_PRIORS_HPP_
#define REFPRIOR_PRIORS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "refprior/geometry.hpp"
#include "refprior/phrase.hpp"
#include "refprior/sample.hpp"

namespace refprior {

inline constexpr double kNeutralPrior = 0.5;

enum class Decay { kLinear, kGaussian };

struct DecayConfig {
  Decay kind = Decay::kLinear;
  double sigma = 0.35;  // normalized length, Gaussian only
};

// Positional likelihood over the unit image plane for a set of spatial
// terms. Evaluated analytically. Composites and multiple terms average their
// base directions; no terms gives the constant neutral field.
//
// Linear bases: left 1-x, right x, top 1-y, bottom y, center
// 1 - |p - (0.5,0.5)| / |(0.5,0.5)|. Gaussian bases replace the linear
// distance d to the favoured edge (or image center) with exp(-d^2/2s^2).
class SpatialPriorField {
 public:
  SpatialPriorField() = default;
  SpatialPriorField(std::vector<SpatialTerm> terms, DecayConfig decay);

  double Value(Point p) const;
  double Value(double x, double y) const { return Value(Point{x, y}); }

  bool neutral() const { return bases_.empty(); }
  const std::vector<SpatialTerm>& terms() const { return terms_; }
  const DecayConfig& decay() const { return decay_; }

  // Row-major samples at cell centers of a resolution x resolution raster.
  std::vector<double> Raster(int resolution) const;

 private:
  double BaseValue(Direction d, Point p) const;

  std::vector<SpatialTerm> terms_;
  std::vector<Direction> bases_;
  DecayConfig decay_;
};

SpatialPriorField FieldFromTerms(std::vector<SpatialTerm> terms,
                                 DecayConfig decay = {});

// Field value at the box center.
double SpatialPrior(const SpatialPriorField& field, const Box& b);

// Dense text-conditioned relevance map. Values are clamped into [0,1] on
// construction; clamped_count() reports how many needed it.
class RelevanceGrid {
 public:
  // Throws Error(kDimensionMismatch) when values.size() != width * height or
  // either dimension is < 1.
  RelevanceGrid(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const double> values() const { return values_; }
  double at(int col, int row) const {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::size_t clamped_count() const { return clamped_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;
  std::size_t clamped_ = 0;
};

// Mean of the cells whose centers fall inside the box (inclusive edges).
// When none do, the cell under the box center is used. Throws
// Error(kDegenerateBox) when the box lies entirely outside the unit square.
double VisualPrior(const RelevanceGrid& grid, const Box& b);

// Scans every cell; kept as the reference for VisualPrior.
double VisualPriorReference(const RelevanceGrid& grid, const Box& b);

// Elementwise (h_s + h_v) / 2 clamped to [0,1]. Throws
// Error(kLengthMismatch).
std::vector<double> Aggregate(std::span<const double> h_s,
                              std::span<const double> h_v);
double Aggregate(double h_s, double h_v);

// Per-candidate prior values plus the detector score.
struct PriorBundle {
  std::vector<double> h_s;
  std::vector<double> h_v;
  std::vector<double> h;
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
};

// Throws Error(kLengthMismatch) unless the arrays agree.
PriorBundle MakeBundle(std::vector<double> h_s, std::vector<double> h_v,
                       std::vector<double> p);

struct PriorConfig {
  Vocabulary vocabulary = Vocabulary::Default();
  DecayConfig decay;
};

SpatialPriorField FieldForPhrase(const std::string& phrase,
                                 const PriorConfig& config);

// grid may be null, in which case every h_v is neutral.
PriorBundle ComputeBundle(const Sample& sample, const RelevanceGrid* grid,
                          const PriorConfig& config);

}  // namespace refprior

#endif  // REFPRIOR_PRIORS_HPP_
