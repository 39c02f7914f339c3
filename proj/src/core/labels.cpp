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

#include "core/labels.hpp"

namespace qad {

std::string_view label_name(TokenLabel label) {
  switch (label) {
    case TokenLabel::kGood: return "GOOD";
    case TokenLabel::kBad: return "BAD";
    case TokenLabel::kMask: return "MASK";
  }
  return "?";
}

std::optional<TokenLabel> parse_label(std::string_view name) {
  if (name == "GOOD") return TokenLabel::kGood;
  if (name == "BAD") return TokenLabel::kBad;
  if (name == "MASK") return TokenLabel::kMask;
  return std::nullopt;
}

}  // namespace qad
