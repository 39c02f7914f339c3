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

#include <iosfwd>
#include <string>
#include <vector>

namespace qad {

// One line of a parallel corpus: "source<TAB>target". The target may be
// absent for decode-only inputs.
struct SentencePair {
  std::string source;
  std::string target;
  bool has_target = false;
};

// Blank lines are skipped. More than one TAB on a line is a data error.
std::vector<SentencePair> read_parallel_corpus(std::istream& in);
std::vector<SentencePair> read_parallel_corpus_file(const std::string& path);

}  // namespace qad
