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

// File-level commands behind the C API. Options arrive as a JSON object;
// unknown keys are rejected. Outputs are JSON text whose first element (or
// first line, for JSON-lines) records the resolved options and seeds.

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "scorers/ngram.hpp"
#include "scorers/token_qe.hpp"

namespace qad::pipeline {

using Json = nlohmann::ordered_json;

// Tracks which option keys were read so leftovers can be reported.
class Options {
 public:
  explicit Options(const Json& options);

  double real(const char* key, double fallback);
  long long integer(const char* key, long long fallback);
  bool boolean(const char* key, bool fallback);
  std::string text(const char* key, const std::string& fallback);
  // Raw value; null when absent.
  Json value(const char* key);

  // Throws kInvalidArgument naming any key that was never read.
  void finish() const;
  // Every option read, with defaults filled in.
  const Json& resolved() const { return resolved_; }

 private:
  Json options_;
  Json resolved_ = Json::object();
};

Json train_lm(const std::string& corpus_path, const Json& options,
              std::unique_ptr<NgramTranslationScorer>* model);

Json annotate(const std::string& mqm_path, const std::string& out_path, const Json& options);

// Token strings map through `vocab`, or through a vocabulary built from the
// data when it is null.
Json train_qe(const std::string& labeled_path, const std::optional<std::string>& valid_path,
              VocabPtr vocab, const Json& options, std::unique_ptr<TokenQeClassifier>* model);

// Source (and optional reference) per line; JSON-lines N-best output.
std::string decode(const TranslationScorer& lm, const QeScorer* qe, const std::string& input_path,
                   const Json& options);

// Re-scores the candidates of a decode output file.
std::string rerank(const TranslationScorer& lm, const QeScorer* qe, const std::string& nbest_path,
                   const Json& options);

std::string mbr(const TranslationScorer& lm, const std::string& input_path, const Json& options);

// `lm` may be null when options.synthetic is set.
Json sweep(const TranslationScorer* lm, const QeScorer* qe,
           const std::optional<std::string>& input_path, const Json& options);
Json compare(const TranslationScorer* lm, const QeScorer* qe,
             const std::optional<std::string>& input_path, const Json& options);

}  // namespace qad::pipeline
