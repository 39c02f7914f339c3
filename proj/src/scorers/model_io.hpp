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

// Model files are line-oriented text:
//
//   QAD1
//   format_version 1
//   kind <ngram|token_qe>
//   <key> <value...>          one record per line, keys repeat freely
//   end
//
// Every model file carries its vocabulary as `vocab_size N` followed by N
// `token <string>` lines in id order. Reals are written with 17 significant
// digits so a load reproduces the saved model bit for bit.

#include <iosfwd>
#include <string>
#include <vector>

#include "core/vocabulary.hpp"

namespace qad {

inline constexpr std::string_view kModelMagic = "QAD1";
inline constexpr int kModelFormatVersion = 1;

struct ModelRecord {
  std::string key;
  std::vector<std::string> fields;
  std::size_t line = 0;

  const std::string& field(std::size_t i) const;
  long long as_int(std::size_t i) const;
  double as_real(std::size_t i) const;
};

class ModelWriter {
 public:
  ModelWriter(std::ostream& out, std::string_view kind);

  void put(std::string_view key, std::string_view value);
  void put(std::string_view key, long long value);
  void put_real(std::string_view key, double value);
  void put_line(std::string_view key, const std::vector<std::string>& fields);
  void put_vocab(const Vocabulary& vocab);
  void finish();

 private:
  std::ostream& out_;
};

// Reads a whole model; `kind` must match the header.
class ModelReader {
 public:
  ModelReader(std::istream& in, std::string_view kind);

  const std::vector<ModelRecord>& records() const { return records_; }
  // Exactly one record with `key`; throws kData otherwise.
  const ModelRecord& single(std::string_view key) const;
  std::vector<const ModelRecord*> all(std::string_view key) const;
  Vocabulary vocab() const;

 private:
  std::vector<ModelRecord> records_;
};

std::string format_real(double value);

}  // namespace qad
