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

#include "eval/experiments.hpp"

#include <numeric>

#include "core/error.hpp"
#include "scorers/oracle_qe.hpp"

namespace qad {

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sequence_qe(const QeScorer& qe, const Segment& seg, const Hypothesis& hyp,
                   const DecodeConfig& config) {
  Hypothesis h = hyp;
  h.qe_good_logprobs = qe.score_sequence(seg.source, h.tokens);
  return qe_avg_good_logprob(h, config);
}

}  // namespace

std::vector<Segment> concatenate_segments(const std::vector<Segment>& segments, int k) {
  require(k >= 1, "concatenate_segments: k must be >= 1");
  if (k == 1) return segments;
  std::vector<Segment> out;
  for (std::size_t i = 0; i < segments.size(); i += k) {
    Segment doc;
    for (std::size_t j = i; j < std::min(segments.size(), i + k); ++j) {
      const Segment& s = segments[j];
      doc.id += (j == i ? "" : "+") + s.id;
      doc.source.insert(doc.source.end(), s.source.begin(), s.source.end());
      doc.reference.insert(doc.reference.end(), s.reference.begin(), s.reference.end());
    }
    out.push_back(std::move(doc));
  }
  return out;
}

QeFactory oracle_qe_factory(VocabPtr vocab, double p_match, double p_miss) {
  return [vocab, p_match, p_miss](const Segment& seg) -> std::shared_ptr<const QeScorer> {
    if (seg.reference.empty()) fail(ErrorKind::kData, "segment '" + seg.id + "' has no reference");
    return std::make_shared<OracleQeScorer>(vocab, seg.reference, p_match, p_miss);
  };
}

QeFactory shared_qe_factory(std::shared_ptr<const QeScorer> qe) {
  return [qe](const Segment&) { return qe; };
}

QualityFn reference_quality(VocabPtr vocab, QualityMetric metric) {
  return [vocab, metric](const Segment& seg, const Hypothesis& hyp) {
    return quality_proxy(vocab->decode(hyp.tokens), vocab->decode(seg.reference), metric);
  };
}

double oracle_human_score(const Vocabulary& vocab, const Segment& segment, const Hypothesis& hyp) {
  const OracleQeScorer oracle(VocabPtr(VocabPtr(), &vocab), segment.reference);
  return -static_cast<double>(oracle.mismatches(hyp.tokens));
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<SweepPoint> alpha_sweep(const std::vector<NBestSegment>& segments, const QeFactory& qe,
                                    const std::vector<double>& grid, const QualityFn& quality,
                                    const DecodeConfig& base) {
  require(!grid.empty(), "alpha_sweep: empty alpha grid");
  for (double a : grid) require(a >= 0.0 && a <= 1.0, "alpha_sweep: alpha outside [0, 1]");
  std::vector<std::shared_ptr<const QeScorer>> scorers;
  for (const auto& s : segments) scorers.push_back(qe(s.segment));
  std::vector<SweepPoint> out;
  for (double alpha : grid) {
    DecodeConfig config = base;
    config.alpha = alpha;
    std::vector<double> q;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto& seg = segments[i];
      const auto ranked = rerank_nbest(seg.candidates, *scorers[i], seg.segment.source, config);
      q.push_back(quality(seg.segment, ranked.best().hyp));
    }
    out.push_back({alpha, mean(q)});
  }
  return out;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kBeam: return "beam";
    case Strategy::kBeamRerank: return "beam_rerank";
    case Strategy::kQa: return "qa";
    case Strategy::kQaRerank: return "qa_rerank";
    case Strategy::kMbr: return "mbr";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : all_strategies()) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<Strategy> all_strategies() {
  return {Strategy::kBeam, Strategy::kBeamRerank, Strategy::kQa, Strategy::kQaRerank, Strategy::kMbr};
}

Hypothesis run_strategy(Strategy strategy, const TranslationScorer& nmt, const QeScorer* qe,
                        const Segment& segment, const CompareOptions& options,
                        std::uint64_t sample_seed, CostCounters* counters) {
  const DecodeConfig& config = options.config;
  auto need_qe = [&]() -> const QeScorer& {
    if (qe == nullptr) fail(ErrorKind::kInvalidArgument, "strategy needs a QE scorer");
    return *qe;
  };
  switch (strategy) {
    case Strategy::kBeam:
      return beam_search(nmt, segment.source, config, counters).best().hyp;
    case Strategy::kBeamRerank: {
      DecodeConfig wide = config;
      wide.num_beams = options.rerank_beams;
      const auto nbest = beam_search(nmt, segment.source, wide, counters);
      return rerank_nbest(nbest, need_qe(), segment.source, config, counters).best().hyp;
    }
    case Strategy::kQa:
      return qa_beam_search(nmt, qe, segment.source, config, counters).best().hyp;
    case Strategy::kQaRerank: {
      const auto nbest = qa_beam_search(nmt, qe, segment.source, config, counters);
      return rerank_nbest(nbest, need_qe(), segment.source, config, counters).best().hyp;
    }
    case Strategy::kMbr: {
      SamplingOptions so = options.sampling;
      so.seed = sample_seed;
      so.max_len = config.max_len;
      so.logprob_floor = config.logprob_floor;
      const auto samples = epsilon_sample(nmt, segment.source, so, counters);
      const Vocabulary& v = nmt.vocab();
      return mbr_decode(samples, [&v](const Hypothesis& a, const Hypothesis& b) {
        return token_f1(v.decode(a.tokens), v.decode(b.tokens));
      });
    }
  }
  fail(ErrorKind::kInvalidArgument, "unknown strategy");
}

CompareReport compare_strategies(const TranslationScorer& nmt, const QeFactory& qe,
                                 const std::vector<Segment>& corpus, const CompareOptions& options) {
  options.config.validate();
  require(!options.strategies.empty(), "compare: no strategies");
  require(options.rerank_beams >= 1, "compare: rerank_beams must be >= 1");
  require(!corpus.empty(), "compare: empty corpus");
  for (const auto& s : corpus) {
    if (s.reference.empty()) fail(ErrorKind::kData, "segment '" + s.id + "' has no reference");
  }
  CompareReport report;
  report.options = options;
  report.segments = concatenate_segments(corpus, options.doc_k);

  const Vocabulary& vocab = nmt.vocab();
  const QualityFn quality = reference_quality(VocabPtr(VocabPtr(), &vocab), options.metric);
  std::vector<std::shared_ptr<const QeScorer>> scorers;
  for (const auto& seg : report.segments) scorers.push_back(qe ? qe(seg) : nullptr);

  for (Strategy strategy : options.strategies) {
    StrategyResult r;
    r.strategy = strategy;
    for (std::size_t i = 0; i < report.segments.size(); ++i) {
      const auto& seg = report.segments[i];
      Hypothesis out = run_strategy(strategy, nmt, scorers[i].get(), seg, options,
                                    options.sampling.seed + i, &r.counters);
      r.quality.push_back(quality(seg, out));
      r.outputs.push_back(std::move(out));
    }
    r.mean_quality = mean(r.quality);
    report.results.push_back(std::move(r));
  }

  const std::size_t n = report.results.size();
  report.pairwise_p.assign(n, std::vector<std::optional<double>>(n));
  if (report.segments.size() >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        report.pairwise_p[i][j] =
            paired_bootstrap(report.results[i].quality, report.results[j].quality,
                             options.bootstrap_resamples, options.bootstrap_seed);
      }
    }
  }

  std::vector<SegmentScorePair> pairs;
  const auto& first = report.results.front();
  for (std::size_t i = 0; i < report.segments.size(); ++i) {
    if (!scorers[i]) break;
    const auto& seg = report.segments[i];
    pairs.push_back({seg.id, sequence_qe(*scorers[i], seg, first.outputs[i], options.config),
                     oracle_human_score(vocab, seg, first.outputs[i])});
  }
  pairs = exclude_segments(pairs, options.excluded_segments);
  auto& c = report.correlation;
  c.pairs = pairs.size();
  auto attempt = [&](auto fn, std::optional<double>& slot) {
    try {
      slot = fn(pairs);
    } catch (const Error&) {
      slot.reset();
    }
  };
  attempt([](const auto& p) { return pearson(p); }, c.pearson);
  attempt([](const auto& p) { return spearman(p); }, c.spearman);
  attempt([](const auto& p) { return kendall(p); }, c.kendall);
  return report;
}

}  // namespace qad
