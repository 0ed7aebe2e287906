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
#ifndef REFPRIOR_GEOMETRY_HPP_
#define REFPRIOR_GEOMETRY_HPP_

namespace refprior {

// Axis-aligned box in normalized image coordinates, xyxy, y pointing down.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  friend bool operator==(const Box&, const Box&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// True when all coordinates lie in [0,1] and extents are non-negative.
bool IsValid(const Box& b);

// Throws Error(kInvalidBox) unless IsValid(b).
Box Validated(const Box& b);

// Converts a pixel [x, y, w, h] box into normalized xyxy. Coordinates that
// overshoot the image by less than half a pixel are clamped; anything else
// that ends up invalid throws.
Box FromPixelXywh(double x, double y, double w, double h, int image_width,
                  int image_height);

double Width(const Box& b);
double Height(const Box& b);
double Area(const Box& b);
Point Center(const Box& b);

// Intersection over union; 0 when the union is empty.
double Iou(const Box& a, const Box& b);

// IoU minus the fraction of the enclosing box not covered by the union.
// Defined as 0 when the enclosing box has zero area.
double Giou(const Box& a, const Box& b);

// Sum of absolute coordinate differences.
double L1Distance(const Box& a, const Box& b);

}  // namespace refprior

#endif  // REFPRIOR_GEOMETRY_HPP_
