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

#include "scorers/corpus.hpp"

#include <fstream>

#include "core/error.hpp"
#include "core/vocabulary.hpp"

namespace qad {

std::vector<SentencePair> read_parallel_corpus(std::istream& in) {
  std::vector<SentencePair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_whitespace(line).empty()) continue;
    SentencePair p;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      p.source = line;
    } else {
      if (line.find('\t', tab + 1) != std::string::npos) {
        fail(ErrorKind::kData, "corpus line " + std::to_string(lineno) + ": more than one TAB");
      }
      p.source = line.substr(0, tab);
      p.target = line.substr(tab + 1);
      p.has_target = true;
    }
    if (split_whitespace(p.source).empty()) {
      fail(ErrorKind::kData, "corpus line " + std::to_string(lineno) + ": empty source");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SentencePair> read_parallel_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open corpus '" + path + "'");
  return read_parallel_corpus(in);
}

}  // namespace qad
