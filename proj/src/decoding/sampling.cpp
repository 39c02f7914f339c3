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

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "decoding/decoders.hpp"

namespace qad {

std::vector<Hypothesis> epsilon_sample(const TranslationScorer& nmt,
                                       std::span<const TokenId> source,
                                       const SamplingOptions& options,
                                       CostCounters* counters) {
  require(options.epsilon >= 0.0 && options.epsilon < 1.0, "epsilon_sample: epsilon outside [0, 1)");
  require(options.count >= 0, "epsilon_sample: negative sample count");
  require(options.max_len >= 1, "epsilon_sample: max_len must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  CostCounters local;
  CostCounters& cc = counters != nullptr ? *counters : local;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const StatePtr root = nmt.init(source);

  std::vector<Hypothesis> out;
  for (int d = 0; d < options.count; ++d) {
    Hypothesis h;
    StatePtr state = root;
    while (static_cast<int>(h.size()) < options.max_len) {
      const auto lps = nmt.next_token_logprobs(*state);
      ++cc.nmt_distribution_calls;
      std::vector<double> kept(lps.size(), 0.0);
      double mass = 0.0;
      std::size_t argmax = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t w = 1; w < lps.size(); ++w) {
        const double p = std::exp(lps[w]);
        if (lps[w] > best) {
          best = lps[w];
          argmax = w;
        }
        if (p >= options.epsilon && p > 0.0) {
          kept[w] = p;
          mass += p;
        }
      }
      std::size_t pick = argmax;
      if (mass > 0.0) {
        const double u = unit(rng) * mass;
        double acc = 0.0;
        for (std::size_t w = 1; w < kept.size(); ++w) {
          if (kept[w] == 0.0) continue;
          acc += kept[w];
          pick = w;
          if (u < acc) break;
        }
      }
      const auto tok = static_cast<TokenId>(pick);
      h.tokens.push_back(tok);
      h.nmt_logprobs.push_back(clamp_logprob(lps[pick], options.logprob_floor));
      h.qe_good_logprobs.push_back(0.0);
      if (tok == kEos) {
        h.finished = true;
        break;
      }
      state = nmt.advance(*state, tok);
    }
    h.nmt_state = state;
    out.push_back(std::move(h));
  }
  cc.wall_time += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qad
