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
#ifndef REFPRIOR_SAMPLE_HPP_
#define REFPRIOR_SAMPLE_HPP_

#include <string>
#include <vector>

#include "refprior/geometry.hpp"

namespace refprior {

struct Candidate {
  Box box;
  double score = 0.0;  // detector matching probability in [0,1]
};

// One image-phrase pair with its detector candidates and ground truth.
struct Sample {
  std::string id;
  int width = 1;   // nominal image size in pixels
  int height = 1;
  std::string phrase;
  Box gt;
  std::string category;
  std::vector<Candidate> candidates;
  bool ambiguous = false;  // scene holds several same-class objects
};

}  // namespace refprior

#endif  // REFPRIOR_SAMPLE_HPP_
