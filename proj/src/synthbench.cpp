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
#include "refprior/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "refprior/error.hpp"
#include "refprior/rng.hpp"

namespace refprior {

void SceneSpec::Validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidSpec, "scene spec: " + what);
  };
  if (min_objects < 1 || max_objects < min_objects || max_objects > 12)
    fail("object count range must satisfy 1 <= min <= max <= 12");
  if (colors.empty() || classes.size() < 2) fail("need colours and >= 2 classes");
  if (!(ambiguity_rate >= 0.0 && ambiguity_rate <= 1.0))
    fail("ambiguity_rate must lie in [0,1]");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) fail("fidelity must lie in [0,1]");
  if (!(composite_rate >= 0.0 && composite_rate <= 1.0))
    fail("composite_rate must lie in [0,1]");
  if (!(detector_noise >= 0.0)) fail("detector_noise must be >= 0");
  if (max_same_class < 2) fail("max_same_class must be >= 2");
  if (grid_resolution < 1) fail("grid_resolution must be >= 1");
  if (ambiguity_rate > 0.0 && max_objects < 2)
    fail("ambiguous scenes need max_objects >= 2");
}

std::string SceneSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["min_objects"] = min_objects;
  j["max_objects"] = max_objects;
  j["colors"] = colors;
  j["classes"] = classes;
  j["ambiguity_rate"] = ambiguity_rate;
  j["max_same_class"] = max_same_class;
  j["composite_rate"] = composite_rate;
  j["detector_noise"] = detector_noise;
  j["fidelity"] = fidelity;
  j["grid_resolution"] = grid_resolution;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SceneSpec SceneSpec::FromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SceneSpec s;
    s.min_objects = j.value("min_objects", s.min_objects);
    s.max_objects = j.value("max_objects", s.max_objects);
    s.colors = j.value("colors", s.colors);
    s.classes = j.value("classes", s.classes);
    s.ambiguity_rate = j.value("ambiguity_rate", s.ambiguity_rate);
    s.max_same_class = j.value("max_same_class", s.max_same_class);
    s.composite_rate = j.value("composite_rate", s.composite_rate);
    s.detector_noise = j.value("detector_noise", s.detector_noise);
    s.fidelity = j.value("fidelity", s.fidelity);
    s.grid_resolution = j.value("grid_resolution", s.grid_resolution);
    s.seed = j.value("seed", s.seed);
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("scene spec: ") + e.what());
  }
}

namespace {

constexpr double kBumpPeak = 0.9;
constexpr double kBackground = 0.1;
constexpr double kSameClassScore = 0.8;
constexpr double kOtherClassScore = 0.3;
constexpr double kBoxJitter = 0.05;  // relative to box extent
constexpr double kMinJitterIou = 0.7;
constexpr double kSpatialMargin = 0.1;
constexpr int kImageWidth = 640;
constexpr int kImageHeight = 480;

struct Object {
  Box box;
  std::string color;
  std::string cls;
};

int UniformInt(SplitMix64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.Below(static_cast<std::uint64_t>(hi - lo + 1)));
}

template <typename T>
const T& Pick(SplitMix64& rng, const std::vector<T>& items) {
  return items[rng.Below(items.size())];
}

// Non-overlapping boxes; returns false if placement keeps failing.
bool PlaceBoxes(SplitMix64& rng, int count, std::vector<Box>& boxes) {
  boxes.clear();
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double w = rng.Uniform(0.08, 0.25);
      const double h = rng.Uniform(0.08, 0.25);
      const double x = rng.Uniform(0.0, 1.0 - w);
      const double y = rng.Uniform(0.0, 1.0 - h);
      const Box b{x, y, x + w, y + h};
      placed = std::none_of(boxes.begin(), boxes.end(), [&](const Box& o) {
        return b.x1 < o.x2 && o.x1 < b.x2 && b.y1 < o.y2 && o.y1 < b.y2;
      });
      if (placed) boxes.push_back(b);
    }
    if (!placed) return false;
  }
  return true;
}

SpatialTerm RandomTerm(SplitMix64& rng, double composite_rate) {
  static constexpr Direction kVertical[] = {Direction::kTop, Direction::kBottom};
  static constexpr Direction kHorizontal[] = {Direction::kLeft, Direction::kRight};
  static constexpr Direction kBase[] = {Direction::kLeft, Direction::kRight,
                                        Direction::kTop, Direction::kBottom};
  if (rng.Bernoulli(composite_rate)) {
    return SpatialTerm::Composite(kVertical[rng.Below(2)], kHorizontal[rng.Below(2)]);
  }
  return SpatialTerm::Base(kBase[rng.Below(4)]);
}

std::string SpatialClause(const SpatialTerm& t) {
  if (t.is_composite()) return " at the " + t.ToString();
  switch (t.first()) {
    case Direction::kLeft:
    case Direction::kRight:
      return " on the " + t.ToString();
    default:
      return " at the " + t.ToString();
  }
}

// Detector-style localisation error proportional to the box size; redrawn
// until the candidate still overlaps its object at IoU >= kMinJitterIou.
Box Jitter(SplitMix64& rng, const Box& b) {
  auto c = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double sx = kBoxJitter * Width(b), sy = kBoxJitter * Height(b);
  for (;;) {
    Box j{c(b.x1 + rng.Normal(0.0, sx)), c(b.y1 + rng.Normal(0.0, sy)),
          c(b.x2 + rng.Normal(0.0, sx)), c(b.y2 + rng.Normal(0.0, sy))};
    if (j.x2 < j.x1) std::swap(j.x1, j.x2);
    if (j.y2 < j.y1) std::swap(j.y1, j.y2);
    if (Iou(j, b) >= kMinJitterIou) return j;
  }
}

RelevanceGrid Bump(int resolution, const Box& target) {
  const Point c = Center(target);
  const double s = 0.5 * std::max(Width(target), Height(target));
  std::vector<double> values(static_cast<std::size_t>(resolution) * resolution);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const double dx = (col + 0.5) / resolution - c.x;
      const double dy = (row + 0.5) / resolution - c.y;
      values[static_cast<std::size_t>(row) * resolution + col] =
          kBackground +
          (kBumpPeak - kBackground) * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
    }
  }
  return RelevanceGrid(resolution, resolution, std::move(values));
}

bool BuildScene(SplitMix64& rng, const SceneSpec& spec, std::size_t index,
                GeneratedScene& out) {
  const bool ambiguous = spec.max_objects >= 2 && rng.Bernoulli(spec.ambiguity_rate);
  int count = UniformInt(rng, spec.min_objects, spec.max_objects);
  if (ambiguous) count = std::max(count, 2);
  const int group = ambiguous
                        ? std::min(count, UniformInt(rng, 2, spec.max_same_class))
                        : 1;

  const std::string& color = Pick(rng, spec.colors);
  const std::string& cls = Pick(rng, spec.classes);
  std::vector<std::string> other_classes;
  for (const auto& c : spec.classes) {
    if (c != cls) other_classes.push_back(c);
  }

  std::vector<Box> boxes;
  if (!PlaceBoxes(rng, count, boxes)) return false;
  std::vector<Object> objects;
  for (int i = 0; i < count; ++i) {
    if (i < group) {
      objects.push_back({boxes[i], color, cls});
    } else {
      objects.push_back({boxes[i], Pick(rng, spec.colors), Pick(rng, other_classes)});
    }
  }

  // Referent and phrase. In ambiguous scenes the spatial term must favour
  // the target over its look-alikes by a clear margin.
  std::size_t target = 0;
  std::vector<SpatialTerm> terms;
  if (ambiguous) {
    const SpatialTerm term = RandomTerm(rng, spec.composite_rate);
    const SpatialPriorField field({term}, {});
    std::vector<double> value(group);
    for (int i = 0; i < group; ++i) value[i] = SpatialPrior(field, objects[i].box);
    target = static_cast<std::size_t>(
        std::max_element(value.begin(), value.end()) - value.begin());
    for (int i = 0; i < group; ++i) {
      if (static_cast<std::size_t>(i) != target &&
          value[target] - value[i] < kSpatialMargin) {
        return false;
      }
    }
    terms.push_back(term);
  }
  std::string phrase = "the " + color + " " + cls;
  if (!terms.empty()) phrase += SpatialClause(terms.front());

  // Relevance map peaks on the referent with probability fidelity, otherwise
  // on a look-alike (or any other object when there is none).
  std::size_t bump_on = target;
  if (count > 1 && !rng.Bernoulli(spec.fidelity)) {
    const int pool_size = ambiguous ? group : count;
    do {
      bump_on = rng.Below(static_cast<std::uint64_t>(pool_size));
    } while (bump_on == target);
  }
  RelevanceGrid grid = Bump(spec.grid_resolution, objects[bump_on].box);

  std::vector<std::size_t> order(objects.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(std::span<std::size_t>(order));

  Sample s;
  char id[32];
  std::snprintf(id, sizeof(id), "scene_%06zu", index);
  s.id = id;
  s.width = kImageWidth;
  s.height = kImageHeight;
  s.phrase = phrase;
  s.gt = objects[target].box;
  s.category = cls;
  s.ambiguous = ambiguous;
  std::size_t target_slot = 0;
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const Object& o = objects[order[slot]];
    const double base = (o.cls == cls && o.color == color) ? kSameClassScore
                                                            : kOtherClassScore;
    const double score = std::clamp(base + rng.Normal(0.0, spec.detector_noise), 0.0, 1.0);
    s.candidates.push_back({Jitter(rng, o.box), score});
    if (order[slot] == target) target_slot = slot;
  }
  out = GeneratedScene{std::move(s), std::move(grid), std::move(terms), target_slot};
  return true;
}

}  // namespace

std::vector<GeneratedScene> Generate(const SceneSpec& spec, std::size_t n_scenes) {
  spec.Validate();
  SplitMix64 rng(spec.seed);
  std::vector<GeneratedScene> scenes;
  scenes.reserve(n_scenes);
  for (std::size_t i = 0; i < n_scenes; ++i) {
    GeneratedScene scene;
    int attempts = 0;
    while (!BuildScene(rng, spec, i, scene)) {
      if (++attempts > 10000) {
        throw Error(ErrorKind::kInvalidSpec, "scene spec cannot be satisfied");
      }
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

bool IsHit(const Sample& sample, std::size_t candidate) {
  return candidate < sample.candidates.size() &&
         Iou(sample.candidates[candidate].box, sample.gt) >= kTop1IouThreshold;
}

std::string EvalReport::ToJson() const {
  const auto bucket = [](const AccuracyBucket& b) {
    nlohmann::ordered_json j;
    j["total"] = b.total;
    j["correct"] = b.correct;
    j["accuracy"] = b.accuracy();
    return j;
  };
  nlohmann::ordered_json j;
  j["top1_accuracy"] = accuracy();
  j["iou_threshold"] = kTop1IouThreshold;
  j["overall"] = bucket(overall);
  j["ambiguous"] = bucket(ambiguous);
  j["unambiguous"] = bucket(unambiguous);
  return j.dump(2) + "\n";
}

EvalReport Evaluate(std::span<const Sample> samples,
                    const std::map<std::string, std::size_t>& predictions) {
  EvalReport report;
  for (const Sample& s : samples) {
    const auto it = predictions.find(s.id);
    if (it == predictions.end()) {
      throw Error(ErrorKind::kMissingPrediction, "no prediction for '" + s.id + "'");
    }
    if (it->second >= s.candidates.size()) {
      throw Error(ErrorKind::kMissingPrediction,
                  "prediction for '" + s.id + "' points past its candidates");
    }
    const bool hit = IsHit(s, it->second);
    AccuracyBucket& b = s.ambiguous ? report.ambiguous : report.unambiguous;
    ++b.total;
    ++report.overall.total;
    if (hit) {
      ++b.correct;
      ++report.overall.correct;
    }
  }
  return report;
}

std::size_t OraclePrediction(const Sample& sample) {
  std::size_t best = 0;
  double best_iou = -1.0;
  for (std::size_t j = 0; j < sample.candidates.size(); ++j) {
    const double v = Iou(sample.candidates[j].box, sample.gt);
    if (v > best_iou) {
      best_iou = v;
      best = j;
    }
  }
  return best;
}

std::size_t DetectorOnlyPrediction(const Sample& sample) {
  if (sample.candidates.empty()) {
    throw Error(ErrorKind::kEmptyCandidates, "sample '" + sample.id + "' has no candidates");
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < sample.candidates.size(); ++j) {
    if (sample.candidates[j].score > sample.candidates[best].score) best = j;
  }
  return best;
}

}  // namespace refprior
