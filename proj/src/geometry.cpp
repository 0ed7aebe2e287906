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
#include "refprior/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "refprior/error.hpp"

namespace refprior {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidBox: return "InvalidBox";
    case ErrorKind::kEmptyPhrase: return "EmptyPhrase";
    case ErrorKind::kDegenerateBox: return "DegenerateBox";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kEmptyCandidates: return "EmptyCandidates";
    case ErrorKind::kNoPositives: return "NoPositives";
    case ErrorKind::kAssignmentMismatch: return "AssignmentMismatch";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kInsufficientPool: return "InsufficientPool";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kMissingPrediction: return "MissingPrediction";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidSample: return "InvalidSample";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kUsage: return "Usage";
  }
  return "Unknown";
}

bool IsValid(const Box& b) {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  return in_unit(b.x1) && in_unit(b.y1) && in_unit(b.x2) && in_unit(b.y2) &&
         b.x2 >= b.x1 && b.y2 >= b.y1;
}

Box Validated(const Box& b) {
  if (!IsValid(b)) {
    std::ostringstream os;
    os.precision(17);
    os << "invalid box [" << b.x1 << ", " << b.y1 << ", " << b.x2 << ", "
       << b.y2 << "]";
    throw Error(ErrorKind::kInvalidBox, os.str());
  }
  return b;
}

Box FromPixelXywh(double x, double y, double w, double h, int image_width,
                  int image_height) {
  if (image_width < 1 || image_height < 1) {
    throw Error(ErrorKind::kInvalidBox, "image dimensions must be positive");
  }
  if (!(w >= 0.0) || !(h >= 0.0)) {
    throw Error(ErrorKind::kInvalidBox, "negative box extent");
  }
  const double iw = image_width;
  const double ih = image_height;
  const auto snap = [](double v, double limit) {
    if (v < 0.0 && v > -0.5) return 0.0;
    if (v > limit && v < limit + 0.5) return limit;
    return v;
  };
  Box b{snap(x, iw) / iw, snap(y, ih) / ih, snap(x + w, iw) / iw,
        snap(y + h, ih) / ih};
  return Validated(b);
}

double Width(const Box& b) { return b.x2 - b.x1; }
double Height(const Box& b) { return b.y2 - b.y1; }
double Area(const Box& b) { return Width(b) * Height(b); }

Point Center(const Box& b) {
  return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0};
}

namespace {

double IntersectionArea(const Box& a, const Box& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

}  // namespace

double Iou(const Box& a, const Box& b) {
  const double inter = IntersectionArea(a, b);
  const double uni = Area(a) + Area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double Giou(const Box& a, const Box& b) {
  const Box enclosing{std::min(a.x1, b.x1), std::min(a.y1, b.y1),
                      std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
  const double enclosing_area = Area(enclosing);
  if (enclosing_area <= 0.0) return 0.0;
  const double inter = IntersectionArea(a, b);
  const double uni = Area(a) + Area(b) - inter;
  const double iou = uni > 0.0 ? inter / uni : 0.0;
  // A box containing the other makes the enclosure the union itself; skip
  // the penalty so rounding cannot separate giou from iou in that case.
  const bool nested =
      (a.x1 <= b.x1 && a.y1 <= b.y1 && a.x2 >= b.x2 && a.y2 >= b.y2) ||
      (b.x1 <= a.x1 && b.y1 <= a.y1 && b.x2 >= a.x2 && b.y2 >= a.y2);
  if (nested) return std::clamp(iou, 0.0, 1.0);
  const double g = iou - (enclosing_area - uni) / enclosing_area;
  return std::clamp(g, -1.0, 1.0);
}

double L1Distance(const Box& a, const Box& b) {
  return std::abs(a.x1 - b.x1) + std::abs(a.y1 - b.y1) +
         std::abs(a.x2 - b.x2) + std::abs(a.y2 - b.y2);
}

}  // namespace refprior
