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

#include <vector>

#include "scorers/scorer.hpp"

namespace qad {

// Reference-aware QE. A target token is GOOD (probability p_match) while the
// hypothesis is still a prefix of reference + EOS, and BAD (p_miss) from the
// first deviation on: divergence is sticky.
class OracleQeScorer : public QeScorer {
 public:
  static constexpr double kDefaultMatch = 0.99;
  static constexpr double kDefaultMiss = 0.01;

  OracleQeScorer(VocabPtr vocab, std::vector<TokenId> reference,
                 double p_match = kDefaultMatch, double p_miss = kDefaultMiss);

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  QeStep extend(const ScorerState& state, TokenId token) const override;
  std::vector<double> score_sequence(std::span<const TokenId> source,
                                     std::span<const TokenId> target) const override;

  const std::vector<TokenId>& reference() const { return reference_; }

  // Length of the longest common prefix of `target` and reference + EOS.
  std::size_t matched_prefix(std::span<const TokenId> target) const;
  // Tokens the oracle labels BAD.
  std::size_t mismatches(std::span<const TokenId> target) const;

 private:
  VocabPtr vocab_;
  std::vector<TokenId> reference_;
  double log_match_;
  double log_miss_;
};

}  // namespace qad
