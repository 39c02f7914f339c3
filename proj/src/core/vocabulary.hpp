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

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qad {

using TokenId = std::int32_t;

inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kUnk = 2;

inline constexpr std::string_view kBosText = "<s>";
inline constexpr std::string_view kEosText = "</s>";
inline constexpr std::string_view kUnkText = "<unk>";

// Dense bijection between token strings and ids. Ids 0..2 are always the
// reserved BOS/EOS/UNK symbols; words follow in insertion order.
class Vocabulary {
 public:
  Vocabulary();  // reserved symbols only
  explicit Vocabulary(const std::vector<std::string>& words);

  // Builds from a full token list as produced by tokens(); the first three
  // entries must be the reserved symbols.
  static Vocabulary from_token_list(const std::vector<std::string>& tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool contains(std::string_view token) const;
  // Unknown strings map to kUnk.
  TokenId id(std::string_view token) const;
  const std::string& token(TokenId id) const;

  // Whitespace tokenization followed by id lookup.
  std::vector<TokenId> encode(std::string_view text) const;
  // Joins word tokens with single spaces; BOS and EOS are dropped.
  std::string decode(std::span<const TokenId> ids) const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  void add(const std::string& word);

  std::vector<std::string> tokens_;
  std::map<std::string, TokenId, std::less<>> ids_;
};

std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace qad
