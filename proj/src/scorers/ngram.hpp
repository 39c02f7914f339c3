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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scorers/corpus.hpp"
#include "scorers/scorer.hpp"

namespace qad {

struct NgramOptions {
  int order = 3;
  double add_k = 1.0;
  // Mixture weight of the bag-of-source channel distribution.
  double channel_weight = 0.3;
};

// (count(h, w) + k) / (count(h) + k * support)
double add_k_probability(double count_hw, double count_h, double k, double support);

// Source-conditioned n-gram translation model.
//
//   P(w | h, S) = (1 - c) * P_ngram(w | h) + c * P_chan(w | S)
//
// P_ngram is add-k smoothed at the longest context (up to order - 1 tokens)
// that occurred in training, backing off one token at a time; the unigram
// level always exists. P_chan averages add-k smoothed co-occurrence
// distributions t(w | s) over the source tokens s. Both parts are proper
// distributions over the support, which is every id except BOS.
class NgramTranslationScorer : public TranslationScorer {
 public:
  struct ContextCounts {
    double total = 0.0;
    std::map<TokenId, double> next;
  };

  static NgramTranslationScorer train(const std::vector<SentencePair>& corpus,
                                      const NgramOptions& options);

  // Training over already-built vocabulary and id sequences.
  static NgramTranslationScorer train_ids(
      VocabPtr vocab, const std::vector<std::pair<std::vector<TokenId>, std::vector<TokenId>>>& pairs,
      const NgramOptions& options);

  const Vocabulary& vocab() const override { return *vocab_; }
  VocabPtr vocab_ptr() const { return vocab_; }
  const NgramOptions& options() const { return options_; }

  StatePtr init(std::span<const TokenId> source) const override;
  std::vector<double> next_token_logprobs(const ScorerState& state) const override;
  StatePtr advance(const ScorerState& state, TokenId token) const override;
  StatePtr decode_state(std::string_view encoded) const override;

  void save(std::ostream& out) const;
  static NgramTranslationScorer load(std::istream& in);

  double support() const { return static_cast<double>(vocab_->size() - 1); }

 private:
  NgramTranslationScorer(VocabPtr vocab, NgramOptions options);

  std::vector<double> channel_distribution(std::span<const TokenId> source) const;
  std::vector<double> ngram_distribution(std::span<const TokenId> history) const;

  VocabPtr vocab_;
  NgramOptions options_;
  std::map<std::vector<TokenId>, ContextCounts> contexts_;  // key: context, oldest first
  std::map<TokenId, ContextCounts> channel_;                 // key: source token
};

}  // namespace qad
