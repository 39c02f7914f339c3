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

#include <span>
#include <vector>

#include "core/hypothesis.hpp"

namespace qad {

struct DecodeConfig {
  double alpha = 0.5;           // weight of the translation score
  int num_beams = 5;
  int topk = 5;                 // extensions per beam sent to the QE scorer
  int max_len = 64;             // generated tokens, EOS included
  double logprob_floor = -30.0;
  bool include_eos_in_qe = true;

  // Throws Error(kInvalidArgument) on a violated invariant.
  void validate() const;
};

// Mean translation log-prob over all tokens of the hypothesis.
double nmt_avg_logprob(const Hypothesis& hyp);

// Mean of log P(GOOD), each term clamped at config.logprob_floor. A trailing
// EOS is skipped when config.include_eos_in_qe is false.
double qe_avg_good_logprob(const Hypothesis& hyp, const DecodeConfig& config);

double merged_score(double score_nmt, double score_qe, double alpha);

// log(p) with log 0 (and anything below the floor) mapped to `floor`.
double clamped_log(double p, double floor);
double clamp_logprob(double logprob, double floor);

struct ScoredEntry {
  Hypothesis hyp;
  double score_nmt = 0.0;
  double score_qe = 0.0;
  double merged = 0.0;
};

// Entries ordered best-first by merged score.
struct ScoredNBest {
  std::vector<ScoredEntry> entries;
  // Set when nothing reached EOS and the entries are unfinished beams.
  bool unfinished_fallback = false;

  bool empty() const { return entries.empty(); }
  const ScoredEntry& best() const { return entries.front(); }
  bool sorted() const;
};

// Scores a hypothesis with both averages and their merge.
ScoredEntry score_entry(Hypothesis hyp, const DecodeConfig& config);

}  // namespace qad
