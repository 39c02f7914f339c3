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

// Synthetic corpora where the translation model splits the mass of the
// correct continuation over two tokens and gives the single largest share
// to a wrong one. Translation is word-for-word, so each source token fixes
// the distribution of one target position:
//
//   plain  one target word with probability 1
//   free   two equally likely words, both acceptable to the model
//   trap   wrong 0.30, correct_a 0.25, correct_b 0.25, other 0.20
//
// The reference picks one of the two correct words at every trap and one of
// the two words at every free position.

#include <cstdint>
#include <memory>

#include "eval/experiments.hpp"
#include "scorers/toy_models.hpp"

namespace qad {

struct ConstructedCorpus {
  VocabPtr vocab;
  std::shared_ptr<const MonotoneLexicalScorer> nmt;
  std::vector<Segment> segments;
};

inline constexpr double kTrapWrong = 0.30;
inline constexpr double kTrapCorrect = 0.25;
inline constexpr double kTrapOther = 0.20;

// One sentence: a plain word, a trap, five free positions, then EOS. A
// 25-wide beam keeps only continuations of the wrong trap word.
ConstructedCorpus trap_sentence_corpus();

// The wrong trap word of trap_sentence_corpus().
inline constexpr std::string_view kTrapSentenceWrong = "inn";

struct SplitMassOptions {
  int sentences = 8;
  int min_len = 3;
  int max_len = 6;
  double trap_rate = 0.35;
  double free_rate = 0.35;  // the rest are plain
  int pool = 16;            // distinct source words per position kind
};

// Random sentences over a fixed vocabulary; every sentence has at least one
// trap. Deterministic per seed.
ConstructedCorpus split_mass_corpus(std::uint64_t seed, const SplitMassOptions& options = {});

}  // namespace qad
