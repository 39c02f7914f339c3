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
#include <functional>
#include <limits>

#include "decoding/decoders.hpp"

namespace qad {

CostCounters& CostCounters::operator+=(const CostCounters& other) {
  nmt_distribution_calls += other.nmt_distribution_calls;
  qe_extend_calls += other.qe_extend_calls;
  qe_sequence_calls += other.qe_sequence_calls;
  merged_evaluations += other.merged_evaluations;
  steps += other.steps;
  wall_time += other.wall_time;
  return *this;
}

namespace {

// Active hypothesis with running sums. Sums accumulate left to right, the
// same order nmt_avg_logprob / qe_avg_good_logprob use, so candidate scores
// computed from them are bit-identical to re-averaging the stored vectors.
struct Beam {
  Hypothesis hyp;
  double nmt_sum = 0.0;
  double qe_sum = 0.0;
  std::size_t qe_count = 0;
};

struct Candidate {
  std::size_t parent = 0;
  TokenId token = 0;
  double nmt_lp = 0.0;
  double qe_lp = 0.0;
  bool qe_scored = false;  // false: EOS excluded from QE, or no QE scorer
  StatePtr qe_state;
  double score_nmt = 0.0;
  double merged = 0.0;
};

// Ranking order: merged score, then lower token id, then lower parent index.
bool better(const Candidate& a, const Candidate& b) {
  if (a.merged != b.merged) return a.merged > b.merged;
  if (a.token != b.token) return a.token < b.token;
  return a.parent < b.parent;
}

double candidate_nmt(const Beam& b, double nmt_lp) {
  return (b.nmt_sum + nmt_lp) / static_cast<double>(b.hyp.size() + 1);
}

double candidate_qe(const Beam& b, const Candidate& c) {
  if (c.qe_scored) return (b.qe_sum + c.qe_lp) / static_cast<double>(b.qe_count + 1);
  return b.qe_count == 0 ? 0.0 : b.qe_sum / static_cast<double>(b.qe_count);
}

// Best merged score any continuation of `b` can reach: future per-token
// log-probs are at most 0 for both terms, so lengthening to max_len is the
// optimum.
double optimistic_bound(const Beam& b, const DecodeConfig& config) {
  const double len = static_cast<double>(config.max_len);
  const double remaining = len - static_cast<double>(b.hyp.size());
  const double nmt = b.nmt_sum / len;
  const double qe = b.qe_sum / (static_cast<double>(b.qe_count) + remaining);
  return config.alpha * nmt + (1.0 - config.alpha) * qe;
}

struct Search {
  const TranslationScorer& nmt;
  const QeScorer* qe;  // null for plain beam search
  bool full_vocab;     // plain beam search expands every token
  DecodeConfig config;
  CostCounters* counters;

  std::vector<Candidate> expand(const std::vector<Beam>& beams, bool last_step) const {
    std::vector<Candidate> all;
    const double floor = config.logprob_floor;
    for (std::size_t b = 0; b < beams.size(); ++b) {
      const Beam& beam = beams[b];
      const auto lps = nmt.next_token_logprobs(*beam.hyp.nmt_state);
      ++counters->nmt_distribution_calls;
      std::vector<Candidate> local;
      for (std::size_t w = 0; w < lps.size(); ++w) {
        const auto tok = static_cast<TokenId>(w);
        if (tok == kBos || std::isinf(lps[w])) continue;
        if (last_step && tok != kEos) continue;
        Candidate c;
        c.parent = b;
        c.token = tok;
        c.nmt_lp = clamp_logprob(lps[w], floor);
        c.score_nmt = candidate_nmt(beam, c.nmt_lp);
        c.merged = c.score_nmt;
        local.push_back(std::move(c));
      }
      if (!full_vocab) {
        // topk by translation score; ties to the lower token id.
        const auto k = std::min(local.size(), static_cast<std::size_t>(config.topk));
        std::partial_sort(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(k), local.end(),
                          [](const Candidate& x, const Candidate& y) {
                            if (x.score_nmt != y.score_nmt) return x.score_nmt > y.score_nmt;
                            return x.token < y.token;
                          });
        local.resize(k);
        for (auto& c : local) {
          const bool score_it = qe != nullptr && (c.token != kEos || config.include_eos_in_qe);
          if (score_it) {
            QeStep step = qe->extend(*beam.hyp.qe_state, c.token);
            ++counters->qe_extend_calls;
            c.qe_lp = clamp_logprob(step.good_logprob, floor);
            c.qe_state = std::move(step.state);
            c.qe_scored = true;
          } else {
            c.qe_state = beam.hyp.qe_state;
            // Without a QE scorer every token is treated as certainly GOOD.
            c.qe_scored = qe == nullptr;
          }
          c.merged = merged_score(c.score_nmt, candidate_qe(beam, c), config.alpha);
        }
      }
      counters->merged_evaluations += local.size();
      for (auto& c : local) all.push_back(std::move(c));
    }
    return all;
  }

  Beam child(const Beam& parent, const Candidate& c) const {
    Beam out;
    out.hyp.tokens = parent.hyp.tokens;
    out.hyp.tokens.push_back(c.token);
    out.hyp.nmt_logprobs = parent.hyp.nmt_logprobs;
    out.hyp.nmt_logprobs.push_back(c.nmt_lp);
    out.hyp.qe_good_logprobs = parent.hyp.qe_good_logprobs;
    out.hyp.qe_good_logprobs.push_back(c.qe_scored ? c.qe_lp : 0.0);
    out.hyp.finished = c.token == kEos;
    out.hyp.nmt_state = out.hyp.finished ? parent.hyp.nmt_state
                                         : nmt.advance(*parent.hyp.nmt_state, c.token);
    out.hyp.qe_state = c.qe_state;
    out.nmt_sum = parent.nmt_sum + c.nmt_lp;
    out.qe_sum = c.qe_scored ? parent.qe_sum + c.qe_lp : parent.qe_sum;
    out.qe_count = c.qe_scored ? parent.qe_count + 1 : parent.qe_count;
    return out;
  }

  ScoredNBest run(std::span<const TokenId> source) const {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    Beam root;
    root.hyp.nmt_state = nmt.init(source);
    if (qe != nullptr) root.hyp.qe_state = qe->init(source);
    std::vector<Beam> active{std::move(root)};
    std::vector<Beam> last_active;
    std::vector<ScoredEntry> finished;
    const auto beams = static_cast<std::size_t>(config.num_beams);

    for (int step = 1; step <= config.max_len && !active.empty(); ++step) {
      ++counters->steps;
      auto cands = expand(active, step == config.max_len);
      std::sort(cands.begin(), cands.end(), better);
      if (cands.size() > beams) cands.resize(beams);

      std::vector<Beam> next;
      for (const auto& c : cands) {
        Beam b = child(active[c.parent], c);
        if (b.hyp.finished) {
          finished.push_back(score_entry(std::move(b.hyp), config));
        } else {
          next.push_back(std::move(b));
        }
      }
      last_active = std::move(active);
      active = std::move(next);

      if (finished.size() >= beams && !active.empty()) {
        std::vector<double> scores;
        for (const auto& e : finished) scores.push_back(e.merged);
        std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(beams - 1),
                         scores.end(), std::greater<>());
        const double worst_kept = scores[beams - 1];
        double bound = -std::numeric_limits<double>::infinity();
        for (const auto& b : active) bound = std::max(bound, optimistic_bound(b, config));
        if (bound <= worst_kept) break;
      }
    }

    ScoredNBest out;
    if (!finished.empty()) {
      std::stable_sort(finished.begin(), finished.end(),
                       [](const ScoredEntry& a, const ScoredEntry& b) { return a.merged > b.merged; });
      if (finished.size() > beams) finished.resize(beams);
      out.entries = std::move(finished);
    } else {
      auto& pool = active.empty() ? last_active : active;
      for (auto& b : pool) {
        if (!b.hyp.empty()) out.entries.push_back(score_entry(std::move(b.hyp), config));
      }
      std::stable_sort(out.entries.begin(), out.entries.end(),
                       [](const ScoredEntry& a, const ScoredEntry& b) { return a.merged > b.merged; });
      out.unfinished_fallback = true;
    }
    counters->wall_time +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
};

}  // namespace

ScoredNBest beam_search(const TranslationScorer& nmt, std::span<const TokenId> source,
                        const DecodeConfig& config, CostCounters* counters) {
  CostCounters local;
  DecodeConfig cfg = config;
  cfg.alpha = 1.0;
  Search s{nmt, nullptr, true, cfg, counters != nullptr ? counters : &local};
  return s.run(source);
}

ScoredNBest qa_beam_search(const TranslationScorer& nmt, const QeScorer* qe,
                           std::span<const TokenId> source, const DecodeConfig& config,
                           CostCounters* counters) {
  require(qe != nullptr || config.alpha == 1.0,
          "qa_beam_search: a QE scorer is required when alpha < 1");
  if (qe != nullptr) {
    require(qe->vocab() == nmt.vocab(), "qa_beam_search: scorer vocabularies differ");
  }
  CostCounters local;
  Search s{nmt, qe, false, config, counters != nullptr ? counters : &local};
  return s.run(source);
}

}  // namespace qad
