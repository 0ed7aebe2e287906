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
#include "refprior/phrase.hpp"

#include "doctest.h"
#include "refprior/error.hpp"
#include "refprior/rng.hpp"

using namespace refprior;

namespace {

using Tokens = std::vector<std::string>;

std::vector<SpatialTerm> Terms(const std::string& s) {
  return ExtractSpatialTerms(Tokenize(s));
}

}  // namespace

TEST_CASE("tokenize normalizes case and punctuation") {
  CHECK(Tokenize("Person on the LEFT.").tokens == Tokens{"person", "on", "the", "left"});
  CHECK(Tokenize("top-left chair").tokens == Tokens{"top", "left", "chair"});
  CHECK(Tokenize("  cup,  2nd  ").tokens == Tokens{"cup", "2nd"});
  CHECK_THROWS_AS(Tokenize(""), Error);
  CHECK_THROWS_AS(Tokenize(" ... "), Error);
  try {
    Tokenize("");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyPhrase);
  }
}

TEST_CASE("spatial term extraction") {
  CHECK(Terms("person on the left") == std::vector{SpatialTerm::Base(Direction::kLeft)});
  CHECK(Terms("the dog").empty());
  CHECK(Terms("cup at the bottom right of the table") ==
        std::vector{SpatialTerm::Composite(Direction::kBottom, Direction::kRight)});
  CHECK(Terms("top-left chair") ==
        std::vector{SpatialTerm::Composite(Direction::kTop, Direction::kLeft)});
  // word order does not matter for composites
  CHECK(Terms("left top chair") == Terms("top left chair"));
}

TEST_CASE("synonyms, duplicates and non-adjacent terms") {
  CHECK(Terms("leftmost cup") == std::vector{SpatialTerm::Base(Direction::kLeft)});
  CHECK(Terms("the middle one") == std::vector{SpatialTerm::Base(Direction::kCenter)});
  CHECK(Terms("upper left lamp") ==
        std::vector{SpatialTerm::Composite(Direction::kTop, Direction::kLeft)});
  CHECK(Terms("left left left") == std::vector{SpatialTerm::Base(Direction::kLeft)});
  CHECK(Terms("left of the top shelf") ==
        std::vector{SpatialTerm::Base(Direction::kLeft), SpatialTerm::Base(Direction::kTop)});
  // same-axis neighbours and center never form composites
  CHECK(Terms("left right") ==
        std::vector{SpatialTerm::Base(Direction::kLeft), SpatialTerm::Base(Direction::kRight)});
  CHECK(Terms("center left") ==
        std::vector{SpatialTerm::Base(Direction::kCenter), SpatialTerm::Base(Direction::kLeft)});
  // negation is not interpreted
  CHECK(Terms("not on the left") == std::vector{SpatialTerm::Base(Direction::kLeft)});
}

TEST_CASE("composite requires orthogonal pair") {
  CHECK_THROWS_AS(SpatialTerm::Composite(Direction::kLeft, Direction::kRight), Error);
  CHECK_THROWS_AS(SpatialTerm::Composite(Direction::kCenter, Direction::kTop), Error);
  const auto t = SpatialTerm::Composite(Direction::kLeft, Direction::kBottom);
  CHECK(t.first() == Direction::kBottom);
  CHECK(t.ToString() == "bottom left");
}

TEST_CASE("vocabulary config") {
  const auto v = Vocabulary::FromConfigText(
      "# extra words\n  far-left = left\nHIGHEST = top\n\n");
  CHECK(v.Lookup("highest") == Direction::kTop);
  CHECK(v.Lookup("left") == Direction::kLeft);
  const Phrase p = Tokenize("the highest shelf");
  CHECK(ExtractSpatialTerms(p, v) == std::vector{SpatialTerm::Base(Direction::kTop)});

  const auto bare = Vocabulary::FromConfigText("gauche = left", false);
  CHECK_FALSE(bare.Lookup("right").has_value());
  CHECK_THROWS_AS(Vocabulary::FromConfigText("left"), Error);
  CHECK_THROWS_AS(Vocabulary::FromConfigText("up = sky"), Error);
}

TEST_CASE("extraction properties on random phrases") {
  const std::vector<std::string> words{"the", "Left", "right", "TOP", "bottom", "cup",
                                       "Middle", "of", "lower", "Dog", "upper"};
  const Vocabulary vocab = Vocabulary::Default();
  SplitMix64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const int n = 1 + static_cast<int>(rng.Below(7));
    for (int i = 0; i < n; ++i) raw += words[rng.Below(words.size())] + " ";
    const Phrase mixed = Tokenize(raw);
    std::string lowered = raw;
    for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto terms = ExtractSpatialTerms(mixed, vocab);
    CHECK(terms == ExtractSpatialTerms(Tokenize(lowered), vocab));
    for (const auto& t : terms) {
      for (Direction d : t.bases()) {
        bool known = false;
        for (const auto& [w, dir] : vocab.entries()) known |= dir == d;
        CHECK(known);
      }
    }
    // an orthogonal pair in isolation yields only the composite
    const auto& tok = mixed.tokens;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      const auto a = vocab.Lookup(tok[i]);
      const auto b = vocab.Lookup(tok[i + 1]);
      if (!a || !b) continue;
      if (!((IsVertical(*a) && IsHorizontal(*b)) || (IsHorizontal(*a) && IsVertical(*b))))
        continue;
      const Phrase pair = Tokenize(tok[i] + " " + tok[i + 1]);
      CHECK(ExtractSpatialTerms(pair, vocab) == std::vector{SpatialTerm::Composite(*a, *b)});
    }
  }
}
