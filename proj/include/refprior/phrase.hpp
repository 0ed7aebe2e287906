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
#ifndef REFPRIOR_PHRASE_HPP_
#define REFPRIOR_PHRASE_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace refprior {

enum class Direction { kLeft, kRight, kTop, kBottom, kCenter };

std::string_view DirectionName(Direction d);
std::optional<Direction> ParseDirection(std::string_view name);
bool IsHorizontal(Direction d);
bool IsVertical(Direction d);

// A single spatial descriptor, or a composite of one vertical and one
// horizontal direction ("bottom left"). Composites are stored with the
// vertical direction first regardless of word order.
class SpatialTerm {
 public:
  static SpatialTerm Base(Direction d);
  // Throws Error(kInvalidSpec) unless the pair is orthogonal.
  static SpatialTerm Composite(Direction a, Direction b);

  bool is_composite() const { return second_.has_value(); }
  Direction first() const { return first_; }
  std::optional<Direction> second() const { return second_; }

  // Base directions this term averages over (one or two).
  std::vector<Direction> bases() const;

  // "left", "bottom left", ...
  std::string ToString() const;

  friend bool operator==(const SpatialTerm&, const SpatialTerm&) = default;

 private:
  SpatialTerm(Direction first, std::optional<Direction> second)
      : first_(first), second_(second) {}

  Direction first_;
  std::optional<Direction> second_;
};

struct Phrase {
  std::string raw;
  std::vector<std::string> tokens;
};

// Splits on anything that is not a letter or digit and lowercases.
// Throws Error(kEmptyPhrase) when no tokens remain.
Phrase Tokenize(std::string_view raw);

// Maps surface words to base directions. The defaults cover the five base
// words plus a handful of synonyms; a plain "word = direction" text file can
// replace or extend them.
class Vocabulary {
 public:
  static Vocabulary Default();

  // Lines are "word = direction"; blank lines and '#' comments are ignored.
  // Entries override the defaults. Throws Error(kParseError) on malformed
  // lines or unknown directions.
  static Vocabulary FromConfigText(std::string_view text,
                                   bool start_from_defaults = true);
  static Vocabulary FromConfigFile(const std::string& path,
                                   bool start_from_defaults = true);

  std::optional<Direction> Lookup(std::string_view word) const;
  void Set(std::string word, Direction d);

  const std::map<std::string, Direction, std::less<>>& entries() const {
    return words_;
  }

 private:
  std::map<std::string, Direction, std::less<>> words_;
};

// Adjacent orthogonal words become one composite; everything else maps to
// its base term. Output is in phrase order with duplicates removed.
std::vector<SpatialTerm> ExtractSpatialTerms(
    const Phrase& phrase, const Vocabulary& vocab = Vocabulary::Default());

}  // namespace refprior

#endif  // REFPRIOR_PHRASE_HPP_
