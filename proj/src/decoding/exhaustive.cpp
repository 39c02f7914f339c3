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
#include <cmath>

#include "decoding/decoders.hpp"

namespace qad {

namespace {

struct Enumerator {
  const TranslationScorer& nmt;
  const QeScorer* qe;
  const DecodeConfig& config;
  CostCounters& counters;
  std::vector<ScoredEntry> out;

  void visit(const Hypothesis& prefix) {
    const auto lps = nmt.next_token_logprobs(*prefix.nmt_state);
    ++counters.nmt_distribution_calls;
    const bool at_limit = static_cast<int>(prefix.size()) + 1 >= config.max_len;
    for (std::size_t w = 0; w < lps.size(); ++w) {
      const auto tok = static_cast<TokenId>(w);
      if (tok == kBos || std::isinf(lps[w])) continue;
      if (at_limit && tok != kEos) continue;
      Hypothesis h = prefix;
      h.tokens.push_back(tok);
      h.nmt_logprobs.push_back(clamp_logprob(lps[w], config.logprob_floor));
      double qe_lp = 0.0;
      if (qe != nullptr && (tok != kEos || config.include_eos_in_qe)) {
        QeStep step = qe->extend(*prefix.qe_state, tok);
        ++counters.qe_extend_calls;
        qe_lp = clamp_logprob(step.good_logprob, config.logprob_floor);
        h.qe_state = std::move(step.state);
      }
      h.qe_good_logprobs.push_back(qe_lp);
      if (tok == kEos) {
        h.finished = true;
        ++counters.merged_evaluations;
        out.push_back(score_entry(std::move(h), config));
      } else {
        h.nmt_state = nmt.advance(*prefix.nmt_state, tok);
        visit(h);
      }
    }
  }
};

}  // namespace

ScoredNBest exhaustive_decode(const TranslationScorer& nmt, const QeScorer* qe,
                              std::span<const TokenId> source, const DecodeConfig& config,
                              std::uint64_t budget, CostCounters* counters) {
  config.validate();
  require(qe != nullptr || config.alpha == 1.0,
          "exhaustive_decode: a QE scorer is required when alpha < 1");
  double space = 1.0;
  for (int i = 0; i < config.max_len; ++i) space *= static_cast<double>(nmt.vocab().size());
  if (space > static_cast<double>(budget)) {
    fail(ErrorKind::kBudget, "exhaustive_decode: |V|^max_len exceeds the enumeration budget");
  }
  const auto start = std::chrono::steady_clock::now();
  CostCounters local;
  Enumerator e{nmt, qe, config, counters != nullptr ? *counters : local, {}};
  Hypothesis root;
  root.nmt_state = nmt.init(source);
  if (qe != nullptr) root.qe_state = qe->init(source);
  e.visit(root);

  std::sort(e.out.begin(), e.out.end(), [](const ScoredEntry& a, const ScoredEntry& b) {
    if (a.merged != b.merged) return a.merged > b.merged;
    return a.hyp.tokens < b.hyp.tokens;
  });
  e.counters.wall_time +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ScoredNBest nbest;
  nbest.entries = std::move(e.out);
  return nbest;
}

}  // namespace qad
