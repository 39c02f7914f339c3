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

#include "scorers/ngram.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "scorers/model_io.hpp"

namespace qad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct NgramState : ScorerState {
  std::shared_ptr<const std::vector<TokenId>> source;
  std::shared_ptr<const std::vector<double>> channel;
  std::vector<TokenId> history;  // last order-1 tokens, oldest first

  std::string encode() const override {
    std::ostringstream os;
    os << "ngram|src=";
    for (std::size_t i = 0; i < source->size(); ++i) os << (i ? "," : "") << (*source)[i];
    os << "|ctx=";
    for (std::size_t i = 0; i < history.size(); ++i) os << (i ? "," : "") << history[i];
    return os.str();
  }
};

std::vector<TokenId> parse_ids(std::string_view s) {
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

}  // namespace

double add_k_probability(double count_hw, double count_h, double k, double support) {
  return (count_hw + k) / (count_h + k * support);
}

NgramTranslationScorer::NgramTranslationScorer(VocabPtr vocab, NgramOptions options)
    : vocab_(std::move(vocab)), options_(options) {
  require(options_.order >= 1, "ngram: order must be >= 1");
  require(options_.add_k > 0.0, "ngram: add_k must be positive");
  require(options_.channel_weight >= 0.0 && options_.channel_weight < 1.0,
          "ngram: channel_weight must lie in [0, 1)");
}

NgramTranslationScorer NgramTranslationScorer::train(const std::vector<SentencePair>& corpus,
                                                     const NgramOptions& options) {
  std::vector<std::string> words;
  for (const auto& p : corpus) {
    if (!p.has_target) fail(ErrorKind::kData, "ngram: training pair without target");
    for (auto& w : split_whitespace(p.source)) words.push_back(std::move(w));
    for (auto& w : split_whitespace(p.target)) words.push_back(std::move(w));
  }
  auto vocab = std::make_shared<const Vocabulary>(words);
  std::vector<std::pair<std::vector<TokenId>, std::vector<TokenId>>> pairs;
  for (const auto& p : corpus) pairs.emplace_back(vocab->encode(p.source), vocab->encode(p.target));
  return train_ids(std::move(vocab), pairs, options);
}

NgramTranslationScorer NgramTranslationScorer::train_ids(
    VocabPtr vocab,
    const std::vector<std::pair<std::vector<TokenId>, std::vector<TokenId>>>& pairs,
    const NgramOptions& options) {
  require(!pairs.empty(), "ngram: empty training corpus");
  NgramTranslationScorer m(std::move(vocab), options);
  const auto n = static_cast<std::size_t>(options.order);
  for (const auto& [src, tgt] : pairs) {
    std::vector<TokenId> padded(n - 1, kBos);
    padded.insert(padded.end(), tgt.begin(), tgt.end());
    padded.push_back(kEos);
    for (std::size_t i = n - 1; i < padded.size(); ++i) {
      const TokenId w = padded[i];
      for (std::size_t len = 0; len < n; ++len) {
        std::vector<TokenId> ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - len),
                                 padded.begin() + static_cast<std::ptrdiff_t>(i));
        auto& c = m.contexts_[ctx];
        c.total += 1.0;
        c.next[w] += 1.0;
      }
      for (TokenId s : src) {
        auto& c = m.channel_[s];
        c.total += 1.0;
        c.next[w] += 1.0;
      }
    }
  }
  return m;
}

std::vector<double> NgramTranslationScorer::channel_distribution(
    std::span<const TokenId> source) const {
  const std::size_t v = vocab_->size();
  std::vector<double> dist(v, 0.0);
  if (source.empty()) return dist;
  const double k = options_.add_k;
  const double s = support();
  for (TokenId src : source) {
    auto it = channel_.find(src);
    const ContextCounts* c = it == channel_.end() ? nullptr : &it->second;
    const double total = c == nullptr ? 0.0 : c->total;
    for (std::size_t w = 1; w < v; ++w) {
      double cw = 0.0;
      if (c != nullptr) {
        auto jt = c->next.find(static_cast<TokenId>(w));
        if (jt != c->next.end()) cw = jt->second;
      }
      dist[w] += add_k_probability(cw, total, k, s);
    }
  }
  for (auto& p : dist) p /= static_cast<double>(source.size());
  return dist;
}

std::vector<double> NgramTranslationScorer::ngram_distribution(
    std::span<const TokenId> history) const {
  const ContextCounts* c = nullptr;
  for (std::size_t len = history.size() + 1; len-- > 0;) {
    std::vector<TokenId> ctx(history.end() - static_cast<std::ptrdiff_t>(len), history.end());
    auto it = contexts_.find(ctx);
    if (it != contexts_.end() && it->second.total > 0.0) {
      c = &it->second;
      break;
    }
  }
  const std::size_t v = vocab_->size();
  std::vector<double> dist(v, 0.0);
  const double total = c == nullptr ? 0.0 : c->total;
  for (std::size_t w = 1; w < v; ++w) {
    double cw = 0.0;
    if (c != nullptr) {
      auto it = c->next.find(static_cast<TokenId>(w));
      if (it != c->next.end()) cw = it->second;
    }
    dist[w] = add_k_probability(cw, total, options_.add_k, support());
  }
  return dist;
}

StatePtr NgramTranslationScorer::init(std::span<const TokenId> source) const {
  auto st = std::make_shared<NgramState>();
  st->source = std::make_shared<const std::vector<TokenId>>(source.begin(), source.end());
  st->channel = std::make_shared<const std::vector<double>>(channel_distribution(source));
  st->history.assign(static_cast<std::size_t>(options_.order - 1), kBos);
  return st;
}

std::vector<double> NgramTranslationScorer::next_token_logprobs(const ScorerState& state) const {
  const auto& st = state_cast<NgramState>(state);
  auto dist = ngram_distribution(st.history);
  const double c = st.source->empty() ? 0.0 : options_.channel_weight;
  std::vector<double> out(dist.size(), kNegInf);
  for (std::size_t w = 1; w < dist.size(); ++w) {
    const double p = (1.0 - c) * dist[w] + c * (*st.channel)[w];
    out[w] = std::log(p);
  }
  return out;
}

StatePtr NgramTranslationScorer::advance(const ScorerState& state, TokenId token) const {
  const auto& st = state_cast<NgramState>(state);
  require(token >= 0 && static_cast<std::size_t>(token) < vocab_->size(), "ngram: token out of range");
  auto next = std::make_shared<NgramState>();
  next->source = st.source;
  next->channel = st.channel;
  next->history = st.history;
  if (!next->history.empty()) {
    next->history.erase(next->history.begin());
    next->history.push_back(token);
  }
  return next;
}

StatePtr NgramTranslationScorer::decode_state(std::string_view encoded) const {
  constexpr std::string_view kSrc = "ngram|src=";
  constexpr std::string_view kCtx = "|ctx=";
  const auto ctx_pos = encoded.find(kCtx);
  if (encoded.substr(0, kSrc.size()) != kSrc || ctx_pos == std::string_view::npos) {
    fail(ErrorKind::kData, "ngram: malformed encoded state");
  }
  auto source = parse_ids(encoded.substr(kSrc.size(), ctx_pos - kSrc.size()));
  auto history = parse_ids(encoded.substr(ctx_pos + kCtx.size()));
  if (history.size() != static_cast<std::size_t>(options_.order - 1)) {
    fail(ErrorKind::kData, "ngram: encoded state has wrong context length");
  }
  auto st = std::make_shared<NgramState>();
  st->source = std::make_shared<const std::vector<TokenId>>(source);
  st->channel = std::make_shared<const std::vector<double>>(channel_distribution(source));
  st->history = std::move(history);
  return st;
}

void NgramTranslationScorer::save(std::ostream& out) const {
  ModelWriter w(out, "ngram");
  w.put("order", static_cast<long long>(options_.order));
  w.put_real("add_k", options_.add_k);
  w.put_real("channel_weight", options_.channel_weight);
  w.put_vocab(*vocab_);
  // ngram <count> <word> <context ids...>
  for (const auto& [ctx, c] : contexts_) {
    for (const auto& [word, count] : c.next) {
      std::vector<std::string> f{format_real(count), std::to_string(word)};
      for (TokenId t : ctx) f.push_back(std::to_string(t));
      w.put_line("ngram", f);
    }
  }
  // channel <count> <word> <source id>
  for (const auto& [src, c] : channel_) {
    for (const auto& [word, count] : c.next) {
      w.put_line("channel", {format_real(count), std::to_string(word), std::to_string(src)});
    }
  }
  w.finish();
}

NgramTranslationScorer NgramTranslationScorer::load(std::istream& in) {
  ModelReader r(in, "ngram");
  NgramOptions opt;
  opt.order = static_cast<int>(r.single("order").as_int(0));
  opt.add_k = r.single("add_k").as_real(0);
  opt.channel_weight = r.single("channel_weight").as_real(0);
  NgramTranslationScorer m(std::make_shared<const Vocabulary>(r.vocab()), opt);
  const auto v = static_cast<long long>(m.vocab_->size());
  auto check_id = [&](const ModelRecord& rec, long long id) {
    if (id < 0 || id >= v) fail(ErrorKind::kData, "model line " + std::to_string(rec.line) + ": id out of range");
    return static_cast<TokenId>(id);
  };
  for (const auto* rec : r.all("ngram")) {
    const double count = rec->as_real(0);
    const TokenId word = check_id(*rec, rec->as_int(1));
    std::vector<TokenId> ctx;
    for (std::size_t i = 2; i < rec->fields.size(); ++i) ctx.push_back(check_id(*rec, rec->as_int(i)));
    if (ctx.size() >= static_cast<std::size_t>(opt.order)) {
      fail(ErrorKind::kData, "model line " + std::to_string(rec->line) + ": context longer than order");
    }
    auto& c = m.contexts_[ctx];
    c.total += count;
    c.next[word] += count;
  }
  for (const auto* rec : r.all("channel")) {
    const double count = rec->as_real(0);
    const TokenId word = check_id(*rec, rec->as_int(1));
    auto& c = m.channel_[check_id(*rec, rec->as_int(2))];
    c.total += count;
    c.next[word] += count;
  }
  return m;
}

}  // namespace qad
