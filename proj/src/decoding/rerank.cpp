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

#include <algorithm>
#include <chrono>
#include <limits>

#include "decoding/decoders.hpp"

namespace qad {

ScoredNBest rerank_nbest(std::vector<Hypothesis> candidates, const QeScorer& qe,
                         std::span<const TokenId> source, const DecodeConfig& config,
                         CostCounters* counters) {
  require(!candidates.empty(), "rerank_nbest: no candidates");
  require(config.alpha >= 0.0 && config.alpha <= 1.0, "rerank_nbest: alpha outside [0, 1]");
  const auto start = std::chrono::steady_clock::now();
  ScoredNBest out;
  for (auto& hyp : candidates) {
    require(!hyp.empty() && hyp.nmt_logprobs.size() == hyp.tokens.size(),
            "rerank_nbest: candidate without translation log-probs");
    auto lps = qe.score_sequence(source, hyp.tokens);
    for (auto& lp : lps) lp = clamp_logprob(lp, config.logprob_floor);
    if (!config.include_eos_in_qe && hyp.tokens.back() == kEos) lps.back() = 0.0;
    hyp.qe_good_logprobs = std::move(lps);
    hyp.qe_state.reset();
    out.entries.push_back(score_entry(std::move(hyp), config));
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const ScoredEntry& a, const ScoredEntry& b) { return a.merged > b.merged; });
  if (counters != nullptr) {
    counters->qe_sequence_calls += candidates.size();
    counters->merged_evaluations += candidates.size();
    counters->wall_time +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

ScoredNBest rerank_nbest(const ScoredNBest& nbest, const QeScorer& qe,
                         std::span<const TokenId> source, const DecodeConfig& config,
                         CostCounters* counters) {
  std::vector<Hypothesis> hyps;
  for (const auto& e : nbest.entries) hyps.push_back(e.hyp);
  auto out = rerank_nbest(std::move(hyps), qe, source, config, counters);
  out.unfinished_fallback = nbest.unfinished_fallback;
  return out;
}

std::size_t mbr_select(const std::vector<Hypothesis>& candidates, const Utility& utility) {
  require(!candidates.empty(), "mbr: no candidates");
  if (candidates.size() == 1) return 0;
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j != i) sum += utility(candidates[i], candidates[j]);
    }
    const double mean = sum / static_cast<double>(candidates.size() - 1);
    if (mean > best_score) {
      best_score = mean;
      best = i;
    }
  }
  return best;
}

Hypothesis mbr_decode(const std::vector<Hypothesis>& candidates, const Utility& utility) {
  return candidates[mbr_select(candidates, utility)];
}

}  // namespace qad
