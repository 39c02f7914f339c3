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

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "core/error.hpp"
#include "core/hypothesis.hpp"
#include "core/vocabulary.hpp"

namespace qad {

using VocabPtr = std::shared_ptr<const Vocabulary>;

// Autoregressive translation model over a shared vocabulary.
//
// All methods are const and scorers hold no per-call mutable state, so one
// scorer may serve concurrent decodes.
class TranslationScorer {
 public:
  virtual ~TranslationScorer() = default;

  virtual const Vocabulary& vocab() const = 0;

  // State bound to `source` with an empty target prefix.
  virtual StatePtr init(std::span<const TokenId> source) const = 0;

  // Log-probabilities for every vocabulary id. exp() of the entries sums to
  // one; impossible tokens carry -infinity.
  virtual std::vector<double> next_token_logprobs(const ScorerState& state) const = 0;

  // State after appending `token`. Never mutates `state`.
  virtual StatePtr advance(const ScorerState& state, TokenId token) const = 0;

  // Inverse of ScorerState::encode() for states produced by this scorer.
  virtual StatePtr decode_state(std::string_view encoded) const = 0;
};

struct QeStep {
  StatePtr state;
  double good_logprob = 0.0;  // log P(GOOD) for the appended token
};

// Uni-directional token-level quality estimator: the GOOD probability of
// position i depends only on the source and target tokens 1..i.
class QeScorer {
 public:
  virtual ~QeScorer() = default;

  virtual const Vocabulary& vocab() const = 0;

  virtual StatePtr init(std::span<const TokenId> source) const = 0;

  virtual QeStep extend(const ScorerState& state, TokenId token) const = 0;

  // Per-token log P(GOOD) for a whole target computed without the
  // incremental state path. Must agree with chained extend() calls.
  virtual std::vector<double> score_sequence(std::span<const TokenId> source,
                                             std::span<const TokenId> target) const = 0;
};

// Downcast helper for scorer implementations.
template <typename T>
const T& state_cast(const ScorerState& state) {
  const T* p = dynamic_cast<const T*>(&state);
  if (p == nullptr) fail(ErrorKind::kInvalidArgument, "scorer state of foreign type");
  return *p;
}

}  // namespace qad
