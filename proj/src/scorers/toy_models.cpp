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

#include "scorers/toy_models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_distribution(const std::vector<double>& p, std::size_t v, const char* who) {
  require(p.size() == v, std::string(who) + ": distribution has wrong length");
  double sum = 0.0;
  for (double x : p) {
    require(x >= 0.0 && std::isfinite(x), std::string(who) + ": negative or non-finite probability");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-9, std::string(who) + ": probabilities do not sum to 1");
}

std::vector<double> to_logs(const std::vector<double>& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] > 0.0 ? std::log(p[i]) : kNegInf;
  return out;
}

std::string join_ids(const std::vector<TokenId>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "," : "") << ids[i];
  return os.str();
}

std::vector<TokenId> split_ids(std::string_view s) {
  std::vector<TokenId> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string_view::npos) j = s.size();
    out.push_back(static_cast<TokenId>(std::stol(std::string(s.substr(i, j - i)))));
    i = j + 1;
  }
  return out;
}

std::string_view strip_prefix(std::string_view s, std::string_view prefix, const char* who) {
  if (s.substr(0, prefix.size()) != prefix) {
    fail(ErrorKind::kData, std::string(who) + ": malformed encoded state");
  }
  return s.substr(prefix.size());
}

struct HistoryState : ScorerState {
  std::vector<TokenId> history;
  std::string encode() const override { return "table|" + join_ids(history); }
};

struct LexicalState : ScorerState {
  std::shared_ptr<const std::vector<TokenId>> source;
  std::size_t position = 0;
  std::string encode() const override {
    return "lexical|" + std::to_string(position) + "|" + join_ids(*source);
  }
};

struct HashState : ScorerState {
  std::uint64_t hash = 0;
  std::string encode() const override { return "hash|" + std::to_string(hash); }
};

std::uint64_t source_hash(std::uint64_t seed, std::span<const TokenId> source) {
  std::uint64_t h = mix_hash(seed, 0x5eedULL);
  for (TokenId t : source) h = mix_hash(h, static_cast<std::uint64_t>(t));
  // Separator so that source and prefix tokens never alias.
  return mix_hash(h, 0xffffffffULL);
}

}  // namespace

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t value) {
  std::uint64_t z = h ^ (value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double hash_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::vector<double> dense_probs(std::size_t vocab_size, const SparseDist& entries) {
  std::vector<double> p(vocab_size, 0.0);
  for (const auto& [id, prob] : entries) {
    require(id >= 0 && static_cast<std::size_t>(id) < vocab_size, "dense_probs: id out of range");
    p[static_cast<std::size_t>(id)] += prob;
  }
  return p;
}

// ContextTableScorer

ContextTableScorer::ContextTableScorer(VocabPtr vocab, int context_len, Table table,
                                       std::vector<double> fallback)
    : vocab_(std::move(vocab)),
      context_len_(static_cast<std::size_t>(context_len)),
      table_(std::move(table)),
      fallback_(std::move(fallback)) {
  require(context_len >= 0, "context table: negative context length");
  const std::size_t v = vocab_->size();
  if (fallback_.empty()) {
    fallback_.assign(v, 1.0 / static_cast<double>(v - 1));
    fallback_[kBos] = 0.0;
  }
  check_distribution(fallback_, v, "context table");
  for (auto& [ctx, probs] : table_) {
    require(ctx.size() == context_len_, "context table: context of wrong length");
    check_distribution(probs, v, "context table");
    probs = to_logs(probs);
  }
  fallback_ = to_logs(fallback_);
}

StatePtr ContextTableScorer::init(std::span<const TokenId>) const {
  auto st = std::make_shared<HistoryState>();
  st->history.assign(context_len_, kBos);
  return st;
}

std::vector<double> ContextTableScorer::next_token_logprobs(const ScorerState& state) const {
  const auto& st = state_cast<HistoryState>(state);
  auto it = table_.find(st.history);
  return it == table_.end() ? fallback_ : it->second;
}

StatePtr ContextTableScorer::advance(const ScorerState& state, TokenId token) const {
  const auto& st = state_cast<HistoryState>(state);
  auto next = std::make_shared<HistoryState>(st);
  if (context_len_ > 0) {
    next->history.erase(next->history.begin());
    next->history.push_back(token);
  }
  return next;
}

StatePtr ContextTableScorer::decode_state(std::string_view encoded) const {
  auto st = std::make_shared<HistoryState>();
  st->history = split_ids(strip_prefix(encoded, "table|", "context table"));
  if (st->history.size() != context_len_) fail(ErrorKind::kData, "context table: bad state");
  return st;
}

// MonotoneLexicalScorer

MonotoneLexicalScorer::MonotoneLexicalScorer(VocabPtr vocab, Lexicon lexicon)
    : vocab_(std::move(vocab)), lexicon_(std::move(lexicon)) {
  for (const auto& [src, dist] : lexicon_) {
    check_distribution(dense_probs(vocab_->size(), dist), vocab_->size(), "lexicon");
  }
}

StatePtr MonotoneLexicalScorer::init(std::span<const TokenId> source) const {
  auto st = std::make_shared<LexicalState>();
  st->source = std::make_shared<const std::vector<TokenId>>(source.begin(), source.end());
  return st;
}

std::vector<double> MonotoneLexicalScorer::next_token_logprobs(const ScorerState& state) const {
  const auto& st = state_cast<LexicalState>(state);
  const std::size_t v = vocab_->size();
  if (st.position >= st.source->size()) return to_logs(dense_probs(v, {{kEos, 1.0}}));
  auto it = lexicon_.find((*st.source)[st.position]);
  if (it == lexicon_.end()) return to_logs(dense_probs(v, {{kUnk, 1.0}}));
  return to_logs(dense_probs(v, it->second));
}

StatePtr MonotoneLexicalScorer::advance(const ScorerState& state, TokenId) const {
  const auto& st = state_cast<LexicalState>(state);
  auto next = std::make_shared<LexicalState>(st);
  ++next->position;
  return next;
}

StatePtr MonotoneLexicalScorer::decode_state(std::string_view encoded) const {
  auto rest = strip_prefix(encoded, "lexical|", "lexical");
  const auto bar = rest.find('|');
  if (bar == std::string_view::npos) fail(ErrorKind::kData, "lexical: malformed encoded state");
  auto st = std::make_shared<LexicalState>();
  st->position = std::stoul(std::string(rest.substr(0, bar)));
  st->source = std::make_shared<const std::vector<TokenId>>(split_ids(rest.substr(bar + 1)));
  return st;
}

// RandomTranslationScorer

RandomTranslationScorer::RandomTranslationScorer(VocabPtr vocab, std::uint64_t seed,
                                                 double sharpness)
    : vocab_(std::move(vocab)), seed_(seed), sharpness_(sharpness) {}

StatePtr RandomTranslationScorer::init(std::span<const TokenId> source) const {
  auto st = std::make_shared<HashState>();
  st->hash = source_hash(seed_, source);
  return st;
}

std::vector<double> RandomTranslationScorer::next_token_logprobs(const ScorerState& state) const {
  const auto& st = state_cast<HashState>(state);
  const std::size_t v = vocab_->size();
  std::vector<double> logits(v, kNegInf);
  double max_logit = kNegInf;
  for (std::size_t w = 1; w < v; ++w) {
    logits[w] = sharpness_ * hash_unit(mix_hash(st.hash, 0x1000 + w));
    max_logit = std::max(max_logit, logits[w]);
  }
  double z = 0.0;
  for (std::size_t w = 1; w < v; ++w) z += std::exp(logits[w] - max_logit);
  const double log_z = max_logit + std::log(z);
  for (std::size_t w = 1; w < v; ++w) logits[w] -= log_z;
  return logits;
}

StatePtr RandomTranslationScorer::advance(const ScorerState& state, TokenId token) const {
  auto next = std::make_shared<HashState>();
  next->hash = mix_hash(state_cast<HashState>(state).hash, static_cast<std::uint64_t>(token));
  return next;
}

StatePtr RandomTranslationScorer::decode_state(std::string_view encoded) const {
  auto st = std::make_shared<HashState>();
  st->hash = std::stoull(std::string(strip_prefix(encoded, "hash|", "random")));
  return st;
}

// RandomQeScorer

RandomQeScorer::RandomQeScorer(VocabPtr vocab, std::uint64_t seed, double sharpness)
    : vocab_(std::move(vocab)), seed_(seed), sharpness_(sharpness) {}

double RandomQeScorer::good_logprob(std::uint64_t prefix_hash) const {
  const double logit = sharpness_ * hash_unit(mix_hash(prefix_hash, 0x9e57ULL));
  // log sigmoid(x) = -log(1 + e^-x)
  return -std::log1p(std::exp(-logit));
}

StatePtr RandomQeScorer::init(std::span<const TokenId> source) const {
  auto st = std::make_shared<HashState>();
  st->hash = source_hash(seed_ ^ 0x0e0e0e0eULL, source);
  return st;
}

QeStep RandomQeScorer::extend(const ScorerState& state, TokenId token) const {
  auto next = std::make_shared<HashState>();
  next->hash = mix_hash(state_cast<HashState>(state).hash, static_cast<std::uint64_t>(token));
  const double lp = good_logprob(next->hash);
  return {std::move(next), lp};
}

std::vector<double> RandomQeScorer::score_sequence(std::span<const TokenId> source,
                                                   std::span<const TokenId> target) const {
  std::uint64_t h = source_hash(seed_ ^ 0x0e0e0e0eULL, source);
  std::vector<double> out;
  out.reserve(target.size());
  for (TokenId t : target) {
    h = mix_hash(h, static_cast<std::uint64_t>(t));
    out.push_back(good_logprob(h));
  }
  return out;
}

}  // namespace qad
