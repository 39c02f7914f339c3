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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qad {

// MASK marks in-span tokens that are excluded from every loss and metric.
enum class TokenLabel { kGood, kBad, kMask };

std::string_view label_name(TokenLabel label);
std::optional<TokenLabel> parse_label(std::string_view name);

struct LabeledExample {
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
  std::vector<TokenLabel> labels;  // one per target token

  bool operator==(const LabeledExample&) const = default;
};

}  // namespace qad
