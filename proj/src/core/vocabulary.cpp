// Copyright 2026 The QAD Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/vocabulary.hpp"

#include <cctype>

#include "core/error.hpp"

namespace qad {

Vocabulary::Vocabulary() {
  add(std::string(kBosText));
  add(std::string(kEosText));
  add(std::string(kUnkText));
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) : Vocabulary() {
  for (const auto& w : words) {
    require(!w.empty(), "vocabulary: empty token");
    if (!contains(w)) add(w);
  }
}

Vocabulary Vocabulary::from_token_list(const std::vector<std::string>& tokens) {
  if (tokens.size() < 3 || tokens[kBos] != kBosText || tokens[kEos] != kEosText ||
      tokens[kUnk] != kUnkText) {
    fail(ErrorKind::kData, "vocabulary: token list does not start with reserved symbols");
  }
  Vocabulary v;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    if (tokens[i].empty() || v.contains(tokens[i])) {
      fail(ErrorKind::kData, "vocabulary: duplicate or empty token '" + tokens[i] + "'");
    }
    v.add(tokens[i]);
  }
  return v;
}

void Vocabulary::add(const std::string& word) {
  ids_.emplace(word, static_cast<TokenId>(tokens_.size()));
  tokens_.push_back(word);
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.find(token) != ids_.end();
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  require(id >= 0 && static_cast<std::size_t>(id) < tokens_.size(),
          "vocabulary: id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocabulary::encode(std::string_view text) const {
  std::vector<TokenId> out;
  for (const auto& w : split_whitespace(text)) out.push_back(id(w));
  return out;
}

std::string Vocabulary::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId t : ids) {
    if (t == kBos || t == kEos) continue;
    if (!out.empty()) out += ' ';
    out += token(t);
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace qad
