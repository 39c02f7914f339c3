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

#include "core/scoring.hpp"

#include <cmath>

#include "core/error.hpp"

namespace qad {

bool Hypothesis::well_formed() const {
  if (nmt_logprobs.size() != tokens.size() || qe_good_logprobs.size() != tokens.size()) {
    return false;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!(nmt_logprobs[i] <= 0.0) || !(qe_good_logprobs[i] <= 0.0)) return false;
  }
  if (finished && (tokens.empty() || tokens.back() != kEos)) return false;
  return true;
}

void DecodeConfig::validate() const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(num_beams >= 1, "num_beams must be >= 1");
  require(topk >= 1, "topk must be >= 1");
  require(max_len >= 1, "max_len must be >= 1");
  require(logprob_floor < 0.0 && std::isfinite(logprob_floor),
          "logprob_floor must be a finite negative number");
}

double clamp_logprob(double logprob, double floor) {
  if (std::isnan(logprob)) fail(ErrorKind::kInvalidArgument, "NaN log-probability");
  return logprob < floor ? floor : logprob;
}

double clamped_log(double p, double floor) {
  if (!(p > 0.0)) return floor;
  return clamp_logprob(std::log(p), floor);
}

double nmt_avg_logprob(const Hypothesis& hyp) {
  if (hyp.nmt_logprobs.empty()) {
    fail(ErrorKind::kEmpty, "nmt_avg_logprob: empty hypothesis");
  }
  double sum = 0.0;
  for (double lp : hyp.nmt_logprobs) sum += lp;
  return sum / static_cast<double>(hyp.nmt_logprobs.size());
}

double qe_avg_good_logprob(const Hypothesis& hyp, const DecodeConfig& config) {
  std::size_t n = hyp.qe_good_logprobs.size();
  if (!config.include_eos_in_qe && n > 0 && !hyp.tokens.empty() && hyp.tokens.back() == kEos) {
    --n;
  }
  if (n == 0) fail(ErrorKind::kEmpty, "qe_avg_good_logprob: no tokens to average");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += clamp_logprob(hyp.qe_good_logprobs[i], config.logprob_floor);
  }
  return sum / static_cast<double>(n);
}

double merged_score(double score_nmt, double score_qe, double alpha) {
  require(std::isfinite(score_nmt) && std::isfinite(score_qe),
          "merged_score: non-finite input");
  require(alpha >= 0.0 && alpha <= 1.0, "merged_score: alpha outside [0, 1]");
  return alpha * score_nmt + (1.0 - alpha) * score_qe;
}

bool ScoredNBest::sorted() const {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].merged < entries[i].merged) return false;
  }
  return true;
}

ScoredEntry score_entry(Hypothesis hyp, const DecodeConfig& config) {
  ScoredEntry e;
  e.score_nmt = nmt_avg_logprob(hyp);
  // A lone EOS with EOS excluded from QE has nothing to average; it is
  // treated as QE-neutral rather than unscorable.
  const bool qe_empty = hyp.tokens.size() == 1 && hyp.tokens[0] == kEos &&
                        !config.include_eos_in_qe;
  e.score_qe = qe_empty ? 0.0 : qe_avg_good_logprob(hyp, config);
  e.merged = merged_score(e.score_nmt, e.score_qe, config.alpha);
  e.hyp = std::move(hyp);
  return e;
}

}  // namespace qad
