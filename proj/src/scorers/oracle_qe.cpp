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

#include "scorers/oracle_qe.hpp"

#include <cmath>

namespace qad {

namespace {

struct OracleState : ScorerState {
  std::size_t position = 0;
  bool diverged = false;
  std::string encode() const override {
    return "oracle|" + std::to_string(position) + "|" + (diverged ? "1" : "0");
  }
};

}  // namespace

OracleQeScorer::OracleQeScorer(VocabPtr vocab, std::vector<TokenId> reference, double p_match,
                               double p_miss)
    : vocab_(std::move(vocab)), reference_(std::move(reference)) {
  require(!reference_.empty(), "oracle QE: empty reference");
  require(p_miss > 0.0 && p_miss < p_match && p_match <= 1.0,
          "oracle QE: need 0 < p_miss < p_match <= 1");
  log_match_ = std::log(p_match);
  log_miss_ = std::log(p_miss);
}

StatePtr OracleQeScorer::init(std::span<const TokenId>) const {
  return std::make_shared<OracleState>();
}

QeStep OracleQeScorer::extend(const ScorerState& state, TokenId token) const {
  const auto& st = state_cast<OracleState>(state);
  auto next = std::make_shared<OracleState>(st);
  bool match = false;
  if (!st.diverged) {
    if (st.position < reference_.size()) {
      match = token == reference_[st.position];
    } else if (st.position == reference_.size()) {
      match = token == kEos;
    }
  }
  next->diverged = !match;
  ++next->position;
  return {std::move(next), match ? log_match_ : log_miss_};
}

std::size_t OracleQeScorer::matched_prefix(std::span<const TokenId> target) const {
  std::size_t i = 0;
  while (i < target.size()) {
    const TokenId want = i < reference_.size() ? reference_[i] : kEos;
    if (i > reference_.size() || target[i] != want) break;
    ++i;
  }
  return i;
}

std::size_t OracleQeScorer::mismatches(std::span<const TokenId> target) const {
  return target.size() - matched_prefix(target);
}

std::vector<double> OracleQeScorer::score_sequence(std::span<const TokenId>,
                                                   std::span<const TokenId> target) const {
  const std::size_t good = matched_prefix(target);
  std::vector<double> out(target.size(), log_miss_);
  for (std::size_t i = 0; i < good; ++i) out[i] = log_match_;
  return out;
}

}  // namespace qad
