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

#include "scorers/token_qe.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "scorers/model_io.hpp"

namespace qad {

namespace {

constexpr double kLogitClamp = 30.0;

std::vector<TokenId> sorted_ids(std::span<const TokenId> ids) {
  std::vector<TokenId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool overlaps_source(const std::vector<TokenId>& sorted_source, TokenId token) {
  if (token == kBos || token == kEos || token == kUnk) return false;
  return std::binary_search(sorted_source.begin(), sorted_source.end(), token);
}

struct ClassifierState : ScorerState {
  std::shared_ptr<const std::vector<TokenId>> source;  // sorted, unique
  TokenId previous = kBos;
  std::size_t position = 0;

  std::string encode() const override {
    std::string s = "token_qe|" + std::to_string(previous) + "|" + std::to_string(position) + "|";
    for (std::size_t i = 0; i < source->size(); ++i) {
      if (i) s += ',';
      s += std::to_string((*source)[i]);
    }
    return s;
  }
};

double row_logit(const std::vector<double>& w, const TrainingRow& row) {
  double z = 0.0;
  for (std::uint8_t i = 0; i < row.n_active; ++i) z += w[row.active[i]];
  return std::clamp(z, -kLogitClamp, kLogitClamp);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double macro_f1(const std::vector<double>& weights, const std::vector<TrainingRow>& rows) {
  std::size_t tp_good = 0, fp_good = 0, fn_good = 0;
  for (const auto& r : rows) {
    if (r.masked) continue;
    const bool pred_good = sigmoid(row_logit(weights, r)) >= 0.5;
    if (pred_good && r.good) ++tp_good;
    if (pred_good && !r.good) ++fp_good;
    if (!pred_good && r.good) ++fn_good;
  }
  std::size_t tp_bad = 0, fp_bad = 0, fn_bad = 0;
  for (const auto& r : rows) {
    if (r.masked) continue;
    const bool pred_bad = sigmoid(row_logit(weights, r)) < 0.5;
    if (pred_bad && !r.good) ++tp_bad;
    if (pred_bad && r.good) ++fp_bad;
    if (!pred_bad && !r.good) ++fn_bad;
  }
  return 0.5 * (f1(tp_good, fp_good, fn_good) + f1(tp_bad, fp_bad, fn_bad));
}

std::vector<double> fit_weighted_logistic(std::size_t dimension,
                                          const std::vector<TrainingRow>& rows,
                                          const std::vector<TrainingRow>& valid,
                                          const TrainOptions& options, TrainReport* report) {
  require(options.epochs >= 1, "train: epochs must be >= 1");
  require(options.learning_rate > 0.0, "train: learning rate must be positive");
  require(options.batch_size >= 1, "train: batch size must be >= 1");
  require(options.weights.good > 0.0 && options.weights.bad > 0.0,
          "train: class weights must be positive");

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].masked) order.push_back(i);
  }
  if (order.empty()) fail(ErrorKind::kData, "train: every token is MASK");

  std::vector<double> w(dimension, 0.0);
  std::vector<double> best = w;
  double best_f1 = -1.0;
  int best_epoch = 0;
  int since_best = 0;
  int epoch = 0;
  std::mt19937_64 rng(options.seed);
  std::vector<double> grad(dimension, 0.0);
  const auto batch = static_cast<std::size_t>(options.batch_size);

  for (epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      double weight_sum = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const TrainingRow& r = rows[order[k]];
        const double cw = r.good ? options.weights.good : options.weights.bad;
        const double g = cw * (sigmoid(row_logit(w, r)) - (r.good ? 1.0 : 0.0));
        for (std::uint8_t i = 0; i < r.n_active; ++i) grad[r.active[i]] += g;
        weight_sum += cw;
      }
      for (std::size_t j = 0; j < dimension; ++j) {
        w[j] -= options.learning_rate * (grad[j] / weight_sum + options.l2 * w[j]);
      }
    }
    if (!valid.empty()) {
      const double f = macro_f1(w, valid);
      if (f > best_f1) {
        best_f1 = f;
        best = w;
        best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= options.patience) {
        break;
      }
    }
  }
  const int epochs_run = std::min(epoch, options.epochs);
  if (valid.empty()) {
    best = w;
    best_epoch = epochs_run;
  }
  if (report != nullptr) {
    report->epochs_run = epochs_run;
    report->best_epoch = best_epoch;
    report->train_macro_f1 = macro_f1(best, rows);
    if (!valid.empty()) report->valid_macro_f1 = best_f1;
  }
  return best;
}

TokenQeClassifier::TokenQeClassifier(VocabPtr vocab, std::vector<double> weights)
    : vocab_(std::move(vocab)), weights_(std::move(weights)) {
  if (weights_.size() != dimension_for(vocab_->size())) {
    fail(ErrorKind::kData, "token QE: weight vector does not match vocabulary size");
  }
}

std::size_t TokenQeClassifier::position_bucket(std::size_t position) {
  if (position < 4) return position;
  if (position < 8) return 4;
  if (position < 16) return 5;
  if (position < 32) return 6;
  return 7;
}

TrainingRow TokenQeClassifier::features(std::span<const TokenId> source, TokenId previous,
                                        TokenId current, std::size_t position) const {
  const std::size_t v = vocab_->size();
  require(current >= 0 && static_cast<std::size_t>(current) < v, "token QE: token out of range");
  require(previous >= 0 && static_cast<std::size_t>(previous) < v, "token QE: token out of range");
  TrainingRow row;
  auto push = [&row](std::size_t idx) { row.active[row.n_active++] = static_cast<std::uint32_t>(idx); };
  push(static_cast<std::size_t>(current));
  push(v + static_cast<std::size_t>(previous));
  push(2 * v + position_bucket(position));
  if (overlaps_source(sorted_ids(source), current)) push(2 * v + kPositionBuckets);
  push(2 * v + kPositionBuckets + 1);
  return row;
}

double TokenQeClassifier::logit(const TrainingRow& row) const { return row_logit(weights_, row); }

std::vector<double> TokenQeClassifier::classify_tokens(std::span<const TokenId> source,
                                                       std::span<const TokenId> target) const {
  std::vector<double> out;
  out.reserve(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const TokenId prev = i == 0 ? kBos : target[i - 1];
    out.push_back(sigmoid(logit(features(source, prev, target[i], i))));
  }
  return out;
}

StatePtr TokenQeClassifier::init(std::span<const TokenId> source) const {
  auto st = std::make_shared<ClassifierState>();
  st->source = std::make_shared<const std::vector<TokenId>>(sorted_ids(source));
  return st;
}

QeStep TokenQeClassifier::extend(const ScorerState& state, TokenId token) const {
  const auto& st = state_cast<ClassifierState>(state);
  const TrainingRow row = features(*st.source, st.previous, token, st.position);
  const double z = logit(row);
  auto next = std::make_shared<ClassifierState>(st);
  next->previous = token;
  ++next->position;
  return {std::move(next), -std::log1p(std::exp(-z))};
}

std::vector<double> TokenQeClassifier::score_sequence(std::span<const TokenId> source,
                                                      std::span<const TokenId> target) const {
  auto probs = classify_tokens(source, target);
  for (auto& p : probs) p = std::log(p);
  return probs;
}

void TokenQeClassifier::save(std::ostream& out) const {
  ModelWriter w(out, "token_qe");
  w.put("position_buckets", static_cast<long long>(kPositionBuckets));
  w.put_vocab(*vocab_);
  w.put("dimension", static_cast<long long>(weights_.size()));
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) w.put_line("weight", {std::to_string(i), format_real(weights_[i])});
  }
  w.finish();
}

TokenQeClassifier TokenQeClassifier::load(std::istream& in) {
  ModelReader r(in, "token_qe");
  if (r.single("position_buckets").as_int(0) != static_cast<long long>(kPositionBuckets)) {
    fail(ErrorKind::kData, "token QE: unsupported position bucket count");
  }
  auto vocab = std::make_shared<const Vocabulary>(r.vocab());
  const auto dim = r.single("dimension").as_int(0);
  if (dim != static_cast<long long>(dimension_for(vocab->size()))) {
    fail(ErrorKind::kData, "token QE: dimension does not match vocabulary");
  }
  std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
  for (const auto* rec : r.all("weight")) {
    const auto idx = rec->as_int(0);
    if (idx < 0 || idx >= dim) fail(ErrorKind::kData, "token QE: weight index out of range");
    w[static_cast<std::size_t>(idx)] = rec->as_real(1);
  }
  return TokenQeClassifier(std::move(vocab), std::move(w));
}

VocabPtr vocabulary_from_examples(const std::vector<LabeledExample>& data) {
  std::vector<std::string> words;
  for (const auto& ex : data) {
    words.insert(words.end(), ex.source_tokens.begin(), ex.source_tokens.end());
    words.insert(words.end(), ex.target_tokens.begin(), ex.target_tokens.end());
  }
  return std::make_shared<const Vocabulary>(words);
}

std::vector<TrainingRow> training_rows(const TokenQeClassifier& layout,
                                       const std::vector<LabeledExample>& data) {
  std::vector<TrainingRow> rows;
  const Vocabulary& vocab = layout.vocab();
  for (const auto& ex : data) {
    if (ex.labels.size() != ex.target_tokens.size()) {
      fail(ErrorKind::kData, "labeled example: label count differs from target length");
    }
    std::vector<TokenId> src;
    for (const auto& s : ex.source_tokens) src.push_back(vocab.id(s));
    TokenId prev = kBos;
    for (std::size_t i = 0; i < ex.target_tokens.size(); ++i) {
      const TokenId cur = vocab.id(ex.target_tokens[i]);
      TrainingRow row = layout.features(src, prev, cur, i);
      row.masked = ex.labels[i] == TokenLabel::kMask;
      row.good = ex.labels[i] == TokenLabel::kGood;
      rows.push_back(row);
      prev = cur;
    }
  }
  return rows;
}

TokenQeClassifier train_token_qe(VocabPtr vocab, const std::vector<LabeledExample>& data,
                                 const std::vector<LabeledExample>& valid,
                                 const TrainOptions& options, TrainReport* report) {
  require(!data.empty(), "train_token_qe: empty training data");
  const std::size_t dim = TokenQeClassifier::dimension_for(vocab->size());
  const TokenQeClassifier layout(vocab, std::vector<double>(dim, 0.0));
  const auto rows = training_rows(layout, data);
  const auto valid_rows = training_rows(layout, valid);

  TrainReport local;
  for (const auto& r : rows) {
    if (r.masked) ++local.masked_tokens;
    else if (r.good) ++local.good_tokens;
    else ++local.bad_tokens;
  }
  if (local.good_tokens + local.bad_tokens == 0) {
    fail(ErrorKind::kData, "train_token_qe: every label is MASK");
  }
  if (local.good_tokens == 0 || local.bad_tokens == 0) {
    local.warnings.push_back("training data contains a single class; predictor will lean constant");
  }
  auto w = fit_weighted_logistic(dim, rows, valid_rows, options, &local);
  if (report != nullptr) *report = local;
  return TokenQeClassifier(std::move(vocab), std::move(w));
}

}  // namespace qad
