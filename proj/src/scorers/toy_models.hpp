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

// Hand-specified and pseudo-random scorers for tests, oracles and the
// constructed evaluation corpora.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "scorers/scorer.hpp"

namespace qad {

using SparseDist = std::vector<std::pair<TokenId, double>>;

// Dense probability vector of length `vocab_size` from sparse entries.
std::vector<double> dense_probs(std::size_t vocab_size, const SparseDist& entries);

// Translation table keyed by the previous `context_len` target tokens
// (BOS-padded). Contexts missing from the table use `fallback`, which
// defaults to uniform over every non-BOS id. The source is ignored.
class ContextTableScorer : public TranslationScorer {
 public:
  using Table = std::map<std::vector<TokenId>, std::vector<double>>;

  ContextTableScorer(VocabPtr vocab, int context_len, Table table,
                     std::vector<double> fallback = {});

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  std::vector<double> next_token_logprobs(const ScorerState& state) const override;
  StatePtr advance(const ScorerState& state, TokenId token) const override;
  StatePtr decode_state(std::string_view encoded) const override;

 private:
  VocabPtr vocab_;
  std::size_t context_len_;
  Table table_;
  std::vector<double> fallback_;
};

// Word-for-word monotone translation: target position i is drawn from the
// lexicon entry of source token i; once the source is consumed only EOS is
// possible. Source tokens without an entry translate to UNK.
class MonotoneLexicalScorer : public TranslationScorer {
 public:
  using Lexicon = std::map<TokenId, SparseDist>;

  MonotoneLexicalScorer(VocabPtr vocab, Lexicon lexicon);

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  std::vector<double> next_token_logprobs(const ScorerState& state) const override;
  StatePtr advance(const ScorerState& state, TokenId token) const override;
  StatePtr decode_state(std::string_view encoded) const override;

 private:
  VocabPtr vocab_;
  Lexicon lexicon_;
};

// Full-support distributions that depend on the whole prefix and source
// through a hash: softmax over non-BOS ids of sharpness * u, u in [-1, 1].
class RandomTranslationScorer : public TranslationScorer {
 public:
  RandomTranslationScorer(VocabPtr vocab, std::uint64_t seed, double sharpness = 2.0);

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  std::vector<double> next_token_logprobs(const ScorerState& state) const override;
  StatePtr advance(const ScorerState& state, TokenId token) const override;
  StatePtr decode_state(std::string_view encoded) const override;

 private:
  VocabPtr vocab_;
  std::uint64_t seed_;
  double sharpness_;
};

// P(GOOD) = sigmoid(sharpness * u) with u hashed from source and prefix.
class RandomQeScorer : public QeScorer {
 public:
  RandomQeScorer(VocabPtr vocab, std::uint64_t seed, double sharpness = 3.0);

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  QeStep extend(const ScorerState& state, TokenId token) const override;
  std::vector<double> score_sequence(std::span<const TokenId> source,
                                     std::span<const TokenId> target) const override;

 private:
  double good_logprob(std::uint64_t prefix_hash) const;

  VocabPtr vocab_;
  std::uint64_t seed_;
  double sharpness_;
};

// 64-bit mixing used by the random scorers.
std::uint64_t mix_hash(std::uint64_t h, std::uint64_t value);
// Maps a hash to [-1, 1].
double hash_unit(std::uint64_t h);

}  // namespace qad
