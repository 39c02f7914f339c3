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

// Corpus-level experiments: alpha sweeps over fixed N-best lists and the
// strategy comparison harness.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "decoding/decoders.hpp"
#include "eval/metrics.hpp"

namespace qad {

struct Segment {
  std::string id;
  std::vector<TokenId> source;
  std::vector<TokenId> reference;  // empty when unknown
};

// Joins every run of k consecutive segments into one; a short final group
// is kept. Ids are joined with '+'. k = 1 returns the input.
std::vector<Segment> concatenate_segments(const std::vector<Segment>& segments, int k);

// QE scorer to use for a segment. Reference-aware scorers are built per
// segment; trained ones are shared.
using QeFactory = std::function<std::shared_ptr<const QeScorer>(const Segment&)>;

QeFactory oracle_qe_factory(VocabPtr vocab, double p_match = 0.99, double p_miss = 0.01);
QeFactory shared_qe_factory(std::shared_ptr<const QeScorer> qe);

// Quality of a hypothesis against the segment reference.
using QualityFn = std::function<double(const Segment&, const Hypothesis&)>;

QualityFn reference_quality(VocabPtr vocab, QualityMetric metric = QualityMetric::kTokenF1);

// Stand-in human judgement: minus the number of tokens the reference oracle
// labels BAD.
double oracle_human_score(const Vocabulary& vocab, const Segment& segment, const Hypothesis& hyp);

struct NBestSegment {
  Segment segment;
  std::vector<Hypothesis> candidates;
};

struct SweepPoint {
  double alpha = 0.0;
  double mean_quality = 0.0;
};

// Re-ranks every segment's candidates at each alpha of `grid` and averages
// the quality of the top candidate.
std::vector<SweepPoint> alpha_sweep(const std::vector<NBestSegment>& segments, const QeFactory& qe,
                                    const std::vector<double>& grid, const QualityFn& quality,
                                    const DecodeConfig& base = {});

std::vector<double> default_alpha_grid();  // 0, 0.1, ..., 1

enum class Strategy { kBeam, kBeamRerank, kQa, kQaRerank, kMbr };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
std::vector<Strategy> all_strategies();

struct CompareOptions {
  std::vector<Strategy> strategies = all_strategies();
  DecodeConfig config;
  int rerank_beams = 25;  // N-best width for beam_rerank
  SamplingOptions sampling;
  int doc_k = 1;
  int bootstrap_resamples = 1000;
  std::uint64_t bootstrap_seed = 1;
  QualityMetric metric = QualityMetric::kTokenF1;
  std::set<std::string> excluded_segments;  // correlation only
};

struct StrategyResult {
  Strategy strategy = Strategy::kBeam;
  double mean_quality = 0.0;
  CostCounters counters;
  std::vector<double> quality;       // per segment
  std::vector<Hypothesis> outputs;   // per segment
};

struct CorrelationSummary {
  std::size_t pairs = 0;
  std::optional<double> pearson, spearman, kendall;  // unset when undefined
};

struct CompareReport {
  std::vector<Segment> segments;  // after document grouping
  std::vector<StrategyResult> results;
  // pairwise_p[i][j]: bootstrap p that strategy j is at least as good as i.
  std::vector<std::vector<std::optional<double>>> pairwise_p;
  // QE sequence score vs oracle human score over the first strategy's outputs.
  CorrelationSummary correlation;
  CompareOptions options;
};

// Runs each strategy on every segment. Throws kData when a segment has no
// reference.
CompareReport compare_strategies(const TranslationScorer& nmt, const QeFactory& qe,
                                 const std::vector<Segment>& corpus, const CompareOptions& options);

// Top-1 of one strategy for one segment, adding its cost to `counters`.
Hypothesis run_strategy(Strategy strategy, const TranslationScorer& nmt, const QeScorer* qe,
                        const Segment& segment, const CompareOptions& options,
                        std::uint64_t sample_seed, CostCounters* counters);

}  // namespace qad
