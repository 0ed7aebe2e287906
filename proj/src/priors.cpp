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
#include "refprior/priors.hpp"

#include <algorithm>
#include <cmath>

#include "refprior/error.hpp"

namespace refprior {

SpatialPriorField::SpatialPriorField(std::vector<SpatialTerm> terms,
                                     DecayConfig decay)
    : terms_(std::move(terms)), decay_(decay) {
  if (decay_.kind == Decay::kGaussian && !(decay_.sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidSpec, "gaussian sigma must be positive");
  }
  for (const auto& t : terms_) {
    for (Direction d : t.bases()) bases_.push_back(d);
  }
}

double SpatialPriorField::BaseValue(Direction d, Point p) const {
  double distance = 0.0;
  double linear = 0.0;
  switch (d) {
    case Direction::kLeft:
      distance = p.x;
      linear = 1.0 - p.x;
      break;
    case Direction::kRight:
      distance = 1.0 - p.x;
      linear = p.x;
      break;
    case Direction::kTop:
      distance = p.y;
      linear = 1.0 - p.y;
      break;
    case Direction::kBottom:
      distance = 1.0 - p.y;
      linear = p.y;
      break;
    case Direction::kCenter: {
      distance = std::hypot(p.x - 0.5, p.y - 0.5);
      linear = 1.0 - distance / std::sqrt(0.5);
      break;
    }
  }
  if (decay_.kind == Decay::kGaussian) {
    linear = std::exp(-distance * distance / (2.0 * decay_.sigma * decay_.sigma));
  }
  return std::clamp(linear, 0.0, 1.0);
}

double SpatialPriorField::Value(Point p) const {
  if (bases_.empty()) return kNeutralPrior;
  double sum = 0.0;
  for (Direction d : bases_) sum += BaseValue(d, p);
  return std::clamp(sum / static_cast<double>(bases_.size()), 0.0, 1.0);
}

std::vector<double> SpatialPriorField::Raster(int resolution) const {
  if (resolution < 1) {
    throw Error(ErrorKind::kInvalidSpec, "raster resolution must be >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(resolution) * resolution);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      out[static_cast<std::size_t>(row) * resolution + col] =
          Value((col + 0.5) / resolution, (row + 0.5) / resolution);
    }
  }
  return out;
}

SpatialPriorField FieldFromTerms(std::vector<SpatialTerm> terms,
                                 DecayConfig decay) {
  return SpatialPriorField(std::move(terms), decay);
}

double SpatialPrior(const SpatialPriorField& field, const Box& b) {
  return field.Value(Center(b));
}

RelevanceGrid::RelevanceGrid(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "relevance grid dimensions must be >= 1");
  }
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::kDimensionMismatch,
                "relevance grid has " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  for (double& v : values_) {
    if (std::isnan(v)) {
      v = 0.0;
      ++clamped_;
    } else if (v < 0.0 || v > 1.0) {
      v = std::clamp(v, 0.0, 1.0);
      ++clamped_;
    }
  }
}

namespace {

void CheckOverlapsUnitSquare(const Box& b) {
  const bool finite = std::isfinite(b.x1) && std::isfinite(b.y1) &&
                      std::isfinite(b.x2) && std::isfinite(b.y2);
  if (!finite || b.x2 < 0.0 || b.y2 < 0.0 || b.x1 > 1.0 || b.y1 > 1.0 ||
      b.x2 < b.x1 || b.y2 < b.y1) {
    throw Error(ErrorKind::kDegenerateBox,
                "box does not overlap the relevance grid");
  }
}

bool CenterInside(int index, int extent, double lo, double hi) {
  const double c = (index + 0.5) / extent;
  return c >= lo && c <= hi;
}

// First and one-past-last cell index whose center lies in [lo, hi].
std::pair<int, int> CellRange(int extent, double lo, double hi) {
  int first = std::clamp(static_cast<int>(std::floor(lo * extent - 0.5)), 0,
                         extent);
  while (first < extent && (first + 0.5) / extent < lo) ++first;
  while (first > 0 && (first - 1 + 0.5) / extent >= lo) --first;
  int last = first;
  while (last < extent && CenterInside(last, extent, lo, hi)) ++last;
  return {first, last};
}

double NearestCell(const RelevanceGrid& grid, const Box& b) {
  const Point c = Center(b);
  const int col = std::clamp(static_cast<int>(std::floor(c.x * grid.width())),
                             0, grid.width() - 1);
  const int row = std::clamp(static_cast<int>(std::floor(c.y * grid.height())),
                             0, grid.height() - 1);
  return grid.at(col, row);
}

}  // namespace

double VisualPrior(const RelevanceGrid& grid, const Box& b) {
  CheckOverlapsUnitSquare(b);
  const auto [c0, c1] = CellRange(grid.width(), b.x1, b.x2);
  const auto [r0, r1] = CellRange(grid.height(), b.y1, b.y2);
  if (c0 >= c1 || r0 >= r1) return NearestCell(grid, b);
  double sum = 0.0;
  for (int row = r0; row < r1; ++row) {
    for (int col = c0; col < c1; ++col) sum += grid.at(col, row);
  }
  const double count = static_cast<double>(c1 - c0) * (r1 - r0);
  return std::clamp(sum / count, 0.0, 1.0);
}

double VisualPriorReference(const RelevanceGrid& grid, const Box& b) {
  CheckOverlapsUnitSquare(b);
  double sum = 0.0;
  std::size_t count = 0;
  for (int row = 0; row < grid.height(); ++row) {
    if (!CenterInside(row, grid.height(), b.y1, b.y2)) continue;
    for (int col = 0; col < grid.width(); ++col) {
      if (!CenterInside(col, grid.width(), b.x1, b.x2)) continue;
      sum += grid.at(col, row);
      ++count;
    }
  }
  if (count == 0) return NearestCell(grid, b);
  return std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
}

double Aggregate(double h_s, double h_v) {
  return std::clamp((h_s + h_v) / 2.0, 0.0, 1.0);
}

std::vector<double> Aggregate(std::span<const double> h_s,
                              std::span<const double> h_v) {
  if (h_s.size() != h_v.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "aggregate: h_s has " + std::to_string(h_s.size()) +
                    " entries, h_v has " + std::to_string(h_v.size()));
  }
  std::vector<double> h(h_s.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = Aggregate(h_s[i], h_v[i]);
  return h;
}

PriorBundle MakeBundle(std::vector<double> h_s, std::vector<double> h_v,
                       std::vector<double> p) {
  if (p.size() != h_s.size() || p.size() != h_v.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "bundle arrays must have equal length");
  }
  PriorBundle bundle;
  bundle.h = Aggregate(h_s, h_v);
  bundle.h_s = std::move(h_s);
  bundle.h_v = std::move(h_v);
  bundle.p = std::move(p);
  return bundle;
}

SpatialPriorField FieldForPhrase(const std::string& phrase,
                                 const PriorConfig& config) {
  return FieldFromTerms(ExtractSpatialTerms(Tokenize(phrase), config.vocabulary),
                        config.decay);
}

PriorBundle ComputeBundle(const Sample& sample, const RelevanceGrid* grid,
                          const PriorConfig& config) {
  const SpatialPriorField field = FieldForPhrase(sample.phrase, config);
  const std::size_t n = sample.candidates.size();
  std::vector<double> h_s(n), h_v(n), p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Candidate& c = sample.candidates[j];
    h_s[j] = SpatialPrior(field, c.box);
    h_v[j] = grid ? VisualPrior(*grid, c.box) : kNeutralPrior;
    p[j] = c.score;
  }
  return MakeBundle(std::move(h_s), std::move(h_v), std::move(p));
}

}  // namespace refprior
