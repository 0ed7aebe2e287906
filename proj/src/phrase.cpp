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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "refprior/error.hpp"

namespace refprior {

std::string_view DirectionName(Direction d) {
  switch (d) {
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kTop: return "top";
    case Direction::kBottom: return "bottom";
    case Direction::kCenter: return "center";
  }
  return "";
}

std::optional<Direction> ParseDirection(std::string_view name) {
  for (Direction d : {Direction::kLeft, Direction::kRight, Direction::kTop,
                      Direction::kBottom, Direction::kCenter}) {
    if (DirectionName(d) == name) return d;
  }
  return std::nullopt;
}

bool IsHorizontal(Direction d) {
  return d == Direction::kLeft || d == Direction::kRight;
}

bool IsVertical(Direction d) {
  return d == Direction::kTop || d == Direction::kBottom;
}

SpatialTerm SpatialTerm::Base(Direction d) { return {d, std::nullopt}; }

SpatialTerm SpatialTerm::Composite(Direction a, Direction b) {
  if (IsVertical(a) && IsHorizontal(b)) return {a, b};
  if (IsHorizontal(a) && IsVertical(b)) return {b, a};
  throw Error(ErrorKind::kInvalidSpec,
              "composite needs one vertical and one horizontal direction, "
              "got " + std::string(DirectionName(a)) + "+" +
                  std::string(DirectionName(b)));
}

std::vector<Direction> SpatialTerm::bases() const {
  if (second_) return {first_, *second_};
  return {first_};
}

std::string SpatialTerm::ToString() const {
  std::string s(DirectionName(first_));
  if (second_) {
    s += ' ';
    s += DirectionName(*second_);
  }
  return s;
}

Phrase Tokenize(std::string_view raw) {
  Phrase phrase;
  phrase.raw = std::string(raw);
  std::string current;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      phrase.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) phrase.tokens.push_back(std::move(current));
  if (phrase.tokens.empty()) {
    throw Error(ErrorKind::kEmptyPhrase,
                "phrase has no tokens: \"" + phrase.raw + "\"");
  }
  return phrase;
}

Vocabulary Vocabulary::Default() {
  Vocabulary v;
  v.Set("left", Direction::kLeft);
  v.Set("right", Direction::kRight);
  v.Set("top", Direction::kTop);
  v.Set("bottom", Direction::kBottom);
  v.Set("center", Direction::kCenter);
  v.Set("leftmost", Direction::kLeft);
  v.Set("rightmost", Direction::kRight);
  v.Set("upper", Direction::kTop);
  v.Set("uppermost", Direction::kTop);
  v.Set("lower", Direction::kBottom);
  v.Set("lowest", Direction::kBottom);
  v.Set("middle", Direction::kCenter);
  return v;
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace

Vocabulary Vocabulary::FromConfigText(std::string_view text,
                                      bool start_from_defaults) {
  Vocabulary v = start_from_defaults ? Default() : Vocabulary{};
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = Trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kParseError, "vocabulary line " +
                                              std::to_string(line_no) +
                                              ": expected word = direction");
    }
    const std::string word = Lower(Trim(body.substr(0, eq)));
    const std::string target = Lower(Trim(body.substr(eq + 1)));
    const auto dir = ParseDirection(target);
    if (word.empty() || !dir) {
      throw Error(ErrorKind::kParseError,
                  "vocabulary line " + std::to_string(line_no) +
                      ": unknown direction '" + target + "'");
    }
    v.Set(word, *dir);
  }
  return v;
}

Vocabulary Vocabulary::FromConfigFile(const std::string& path,
                                      bool start_from_defaults) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromConfigText(buf.str(), start_from_defaults);
}

std::optional<Direction> Vocabulary::Lookup(std::string_view word) const {
  if (auto it = words_.find(word); it != words_.end()) return it->second;
  return std::nullopt;
}

void Vocabulary::Set(std::string word, Direction d) {
  words_[std::move(word)] = d;
}

std::vector<SpatialTerm> ExtractSpatialTerms(const Phrase& phrase,
                                             const Vocabulary& vocab) {
  std::vector<SpatialTerm> terms;
  const auto push = [&terms](const SpatialTerm& t) {
    if (std::find(terms.begin(), terms.end(), t) == terms.end())
      terms.push_back(t);
  };
  const auto& tokens = phrase.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto here = vocab.Lookup(tokens[i]);
    if (!here) continue;
    if (i + 1 < tokens.size()) {
      const auto next = vocab.Lookup(tokens[i + 1]);
      const bool orthogonal =
          next && ((IsVertical(*here) && IsHorizontal(*next)) ||
                   (IsHorizontal(*here) && IsVertical(*next)));
      if (orthogonal) {
        push(SpatialTerm::Composite(*here, *next));
        ++i;
        continue;
      }
    }
    push(SpatialTerm::Base(*here));
  }
  return terms;
}

}  // namespace refprior
