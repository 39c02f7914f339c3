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
#include <functional>
#include <span>
#include <vector>

#include "core/scoring.hpp"
#include "scorers/scorer.hpp"

namespace qad {

// Work done by one decode. Counters only grow while a decode runs.
struct CostCounters {
  std::uint64_t nmt_distribution_calls = 0;
  std::uint64_t qe_extend_calls = 0;
  std::uint64_t qe_sequence_calls = 0;  // from-scratch scoring (re-ranking)
  std::uint64_t merged_evaluations = 0;
  std::uint64_t steps = 0;
  double wall_time = 0.0;  // seconds

  CostCounters& operator+=(const CostCounters& other);
};

// Standard beam search ranked by average translation log-prob. Every
// non-BOS extension of every beam is considered. Entries are scored with
// alpha = 1 and carry score_qe = 0.
ScoredNBest beam_search(const TranslationScorer& nmt, std::span<const TokenId> source,
                        const DecodeConfig& config, CostCounters* counters = nullptr);

// Quality-aware beam search. Each step, every active beam offers its `topk`
// best extensions by translation score; each such candidate is extended by
// the QE scorer and ranked by
//
//   alpha * mean(log P_nmt) + (1 - alpha) * mean(log P_GOOD)
//
// and the best `num_beams` survive. Candidates ending in EOS move to the
// finished pool. `qe` may be null only when alpha == 1.
ScoredNBest qa_beam_search(const TranslationScorer& nmt, const QeScorer* qe,
                           std::span<const TokenId> source, const DecodeConfig& config,
                           CostCounters* counters = nullptr);

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 1'000'000;

// Scores every EOS-terminated sequence of at most config.max_len tokens
// (zero-probability extensions excluded) and returns the full ranking.
// Throws kBudget when vocab_size^max_len exceeds `budget`.
ScoredNBest exhaustive_decode(const TranslationScorer& nmt, const QeScorer* qe,
                              std::span<const TokenId> source, const DecodeConfig& config,
                              std::uint64_t budget = kDefaultExhaustiveBudget,
                              CostCounters* counters = nullptr);

// Re-scores complete candidates with `qe` from scratch and re-sorts by the
// merged score. Translation log-probs already stored on the candidates are
// kept. Ties keep the input order.
ScoredNBest rerank_nbest(std::vector<Hypothesis> candidates, const QeScorer& qe,
                         std::span<const TokenId> source, const DecodeConfig& config,
                         CostCounters* counters = nullptr);
ScoredNBest rerank_nbest(const ScoredNBest& nbest, const QeScorer& qe,
                         std::span<const TokenId> source, const DecodeConfig& config,
                         CostCounters* counters = nullptr);

using Utility = std::function<double(const Hypothesis&, const Hypothesis&)>;

// Index of the candidate with the highest mean utility against all other
// candidates; lowest index wins ties.
std::size_t mbr_select(const std::vector<Hypothesis>& candidates, const Utility& utility);
Hypothesis mbr_decode(const std::vector<Hypothesis>& candidates, const Utility& utility);

struct SamplingOptions {
  double epsilon = 0.02;
  int count = 25;
  std::uint64_t seed = 1;
  int max_len = 64;
  double logprob_floor = -30.0;
};

// Ancestral sampling after dropping tokens with probability < epsilon and
// renormalizing. When every token falls below epsilon the argmax is taken.
std::vector<Hypothesis> epsilon_sample(const TranslationScorer& nmt,
                                       std::span<const TokenId> source,
                                       const SamplingOptions& options,
                                       CostCounters* counters = nullptr);

}  // namespace qad
