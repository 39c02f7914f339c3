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

#include "eval/constructed.hpp"

#include <random>
#include <string>

#include "core/error.hpp"

namespace qad {

namespace {

SparseDist trap_dist(const Vocabulary& v, const std::string& wrong, const std::string& a,
                     const std::string& b, const std::string& other) {
  return {{v.id(wrong), kTrapWrong},
          {v.id(a), kTrapCorrect},
          {v.id(b), kTrapCorrect},
          {v.id(other), kTrapOther}};
}

SparseDist free_dist(const Vocabulary& v, const std::string& a, const std::string& b) {
  return {{v.id(a), 0.5}, {v.id(b), 0.5}};
}

}  // namespace

ConstructedCorpus trap_sentence_corpus() {
  // Department of Homeland Security ... -> Ministerium Inner Sicherheit ...
  struct Free {
    const char* src;
    const char* a;
    const char* b;
  };
  const std::vector<Free> frees = {{"Security", "Sicherheit", "Sicherheitsdienst"},
                                   {"said", "sagte", "erklaerte"},
                                   {"on", "am", "an"},
                                   {"Monday", "Montag", "montags"},
                                   {"evening", "Abend", "abends"}};
  std::vector<std::string> words = {"Department", "Homeland", "Ministerium", "inn", "Inn",
                                    "Inner",      "Heimat"};
  for (const auto& f : frees) {
    words.push_back(f.src);
    words.push_back(f.a);
    words.push_back(f.b);
  }
  auto vocab = std::make_shared<const Vocabulary>(words);
  const Vocabulary& v = *vocab;

  MonotoneLexicalScorer::Lexicon lex;
  lex[v.id("Department")] = {{v.id("Ministerium"), 1.0}};
  lex[v.id("Homeland")] = trap_dist(v, std::string(kTrapSentenceWrong), "Inn", "Inner", "Heimat");
  for (const auto& f : frees) lex[v.id(f.src)] = free_dist(v, f.a, f.b);

  Segment seg;
  seg.id = "trap";
  seg.source = {v.id("Department"), v.id("Homeland")};
  seg.reference = {v.id("Ministerium"), v.id("Inner")};
  for (const auto& f : frees) {
    seg.source.push_back(v.id(f.src));
    seg.reference.push_back(v.id(f.a));
  }
  ConstructedCorpus out;
  out.vocab = vocab;
  out.nmt = std::make_shared<MonotoneLexicalScorer>(vocab, std::move(lex));
  out.segments.push_back(std::move(seg));
  return out;
}

ConstructedCorpus split_mass_corpus(std::uint64_t seed, const SplitMassOptions& options) {
  require(options.sentences >= 1, "split_mass_corpus: sentences must be >= 1");
  require(options.min_len >= 1 && options.min_len <= options.max_len,
          "split_mass_corpus: bad length range");
  require(options.trap_rate > 0.0 && options.free_rate >= 0.0 &&
              options.trap_rate + options.free_rate <= 1.0,
          "split_mass_corpus: bad position rates");
  require(options.pool >= 1, "split_mass_corpus: pool must be >= 1");

  std::vector<std::string> words;
  for (int i = 0; i < options.pool; ++i) {
    const std::string n = std::to_string(i);
    for (const char* prefix : {"sp", "tp", "sf", "fa", "fb", "st", "wrong", "ca", "cb", "other"}) {
      words.push_back(prefix + n);
    }
  }
  auto vocab = std::make_shared<const Vocabulary>(words);
  const Vocabulary& v = *vocab;
  MonotoneLexicalScorer::Lexicon lex;
  for (int i = 0; i < options.pool; ++i) {
    const std::string n = std::to_string(i);
    lex[v.id("sp" + n)] = {{v.id("tp" + n), 1.0}};
    lex[v.id("sf" + n)] = free_dist(v, "fa" + n, "fb" + n);
    lex[v.id("st" + n)] = trap_dist(v, "wrong" + n, "ca" + n, "cb" + n, "other" + n);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> length(options.min_len, options.max_len);
  std::uniform_int_distribution<int> word(0, options.pool - 1);
  std::bernoulli_distribution coin(0.5);

  ConstructedCorpus out;
  out.vocab = vocab;
  for (int s = 0; s < options.sentences; ++s) {
    Segment seg;
    seg.id = "s" + std::to_string(s);
    const int len = length(rng);
    std::uniform_int_distribution<int> slot(0, len - 1);
    const int forced_trap = slot(rng);
    for (int p = 0; p < len; ++p) {
      const std::string n = std::to_string(word(rng));
      const double u = unit(rng);
      if (p == forced_trap || u < options.trap_rate) {
        seg.source.push_back(v.id("st" + n));
        seg.reference.push_back(v.id((coin(rng) ? "ca" : "cb") + n));
      } else if (u < options.trap_rate + options.free_rate) {
        seg.source.push_back(v.id("sf" + n));
        seg.reference.push_back(v.id((coin(rng) ? "fa" : "fb") + n));
      } else {
        seg.source.push_back(v.id("sp" + n));
        seg.reference.push_back(v.id("tp" + n));
      }
    }
    out.segments.push_back(std::move(seg));
  }
  out.nmt = std::make_shared<MonotoneLexicalScorer>(vocab, std::move(lex));
  return out;
}

}  // namespace qad
