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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/labels.hpp"
#include "scorers/scorer.hpp"

namespace qad {

// Loss weights per class. Most tokens in MQM-derived data are GOOD, so the
// rare BAD class gets the large weight.
struct ClassWeights {
  double good = 0.05;
  double bad = 0.95;
};

struct TrainOptions {
  ClassWeights weights;
  int epochs = 200;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  int batch_size = 32;
  std::uint64_t seed = 1;
  int patience = 10;  // evaluations without validation macro-F1 gain
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = 0;
  double train_macro_f1 = 0.0;
  std::optional<double> valid_macro_f1;
  std::size_t good_tokens = 0;
  std::size_t bad_tokens = 0;
  std::size_t masked_tokens = 0;
  std::vector<std::string> warnings;
};

// One token position as sparse binary features.
struct TrainingRow {
  std::array<std::uint32_t, 5> active{};
  std::uint8_t n_active = 0;
  bool good = true;
  bool masked = false;
};

// Minibatch SGD on class-weighted binary cross-entropy for the GOOD logit.
// Masked rows are skipped entirely: their `good` field is never read.
// With `valid` non-empty, training stops after `patience` epochs without a
// macro-F1 gain on it and the best weights are returned.
std::vector<double> fit_weighted_logistic(std::size_t dimension,
                                          const std::vector<TrainingRow>& rows,
                                          const std::vector<TrainingRow>& valid,
                                          const TrainOptions& options, TrainReport* report);

// Macro-F1 over GOOD/BAD of rows, GOOD predicted when P(GOOD) >= 0.5.
double macro_f1(const std::vector<double>& weights, const std::vector<TrainingRow>& rows);

// Logistic token-level QE over causal features of position i:
//   current token, previous token (BOS at i = 0), position bucket,
//   "current token occurs in the source", bias.
// Nothing after position i is read, so the scorer is uni-directional.
class TokenQeClassifier : public QeScorer {
 public:
  static constexpr std::size_t kPositionBuckets = 8;

  TokenQeClassifier(VocabPtr vocab, std::vector<double> weights);

  static std::size_t dimension_for(std::size_t vocab_size) { return 2 * vocab_size + kPositionBuckets + 2; }
  static std::size_t position_bucket(std::size_t position);

  std::size_t dimension() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

  // Features of target position `position` given its predecessor.
  TrainingRow features(std::span<const TokenId> source, TokenId previous, TokenId current,
                       std::size_t position) const;

  // P(GOOD) per target token, left to right.
  std::vector<double> classify_tokens(std::span<const TokenId> source,
                                      std::span<const TokenId> target) const;

  const Vocabulary& vocab() const override { return *vocab_; }
  StatePtr init(std::span<const TokenId> source) const override;
  QeStep extend(const ScorerState& state, TokenId token) const override;
  std::vector<double> score_sequence(std::span<const TokenId> source,
                                     std::span<const TokenId> target) const override;

  void save(std::ostream& out) const;
  static TokenQeClassifier load(std::istream& in);

 private:
  double logit(const TrainingRow& row) const;

  VocabPtr vocab_;
  std::vector<double> weights_;
};

// Trains the classifier on non-MASK tokens. Token strings are mapped
// through `vocab`; pass the translation model's vocabulary so both scorers
// agree on ids. Throws kData when every label is MASK.
TokenQeClassifier train_token_qe(VocabPtr vocab, const std::vector<LabeledExample>& data,
                                 const std::vector<LabeledExample>& valid,
                                 const TrainOptions& options, TrainReport* report = nullptr);

// Vocabulary covering every source and target token in `data`.
VocabPtr vocabulary_from_examples(const std::vector<LabeledExample>& data);

// Rows for `data` under `classifier`'s feature layout.
std::vector<TrainingRow> training_rows(const TokenQeClassifier& layout,
                                       const std::vector<LabeledExample>& data);

}  // namespace qad
