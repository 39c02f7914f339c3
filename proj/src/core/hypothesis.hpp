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
#include <string>
#include <vector>

#include "core/vocabulary.hpp"

namespace qad {

// Opaque per-hypothesis scorer state. States are immutable once built;
// extending a hypothesis produces a new state and leaves its parent intact,
// so any number of beams may share a common ancestor.
class ScorerState {
 public:
  virtual ~ScorerState() = default;
  // Self-contained text form; the owning scorer can rebuild the state from it.
  virtual std::string encode() const = 0;
};

using StatePtr = std::shared_ptr<const ScorerState>;

struct Hypothesis {
  std::vector<TokenId> tokens;           // generated tokens, BOS excluded
  std::vector<double> nmt_logprobs;      // log P(h_i | h_<i, S), clamped
  std::vector<double> qe_good_logprobs;  // log P(GOOD | h_<=i, S), clamped
  bool finished = false;                 // last token is EOS
  StatePtr nmt_state;
  StatePtr qe_state;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Checks the equal-length / log-prob / EOS invariants.
  bool well_formed() const;
};

}  // namespace qad
