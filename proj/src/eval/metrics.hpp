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

// Correlations, reference-based quality proxies and paired bootstrap.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qad {

struct SegmentScorePair {
  std::string segment_id;
  double system = 0.0;
  double human = 0.0;
};

// Drops pairs whose segment id is listed in `excluded`.
std::vector<SegmentScorePair> exclude_segments(const std::vector<SegmentScorePair>& pairs,
                                               const std::set<std::string>& excluded);

// Each needs at least two points. Pearson and Spearman throw
// kInvalidArgument on a constant side; Kendall (tau-b) throws only when a
// side has no untied pair at all.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);
double kendall(const std::vector<double>& x, const std::vector<double>& y);

double pearson(const std::vector<SegmentScorePair>& pairs);
double spearman(const std::vector<SegmentScorePair>& pairs);
double kendall(const std::vector<SegmentScorePair>& pairs);

// Ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(const std::vector<double>& values);

// F1 between token multisets. Two empty inputs score 1.
double token_f1(const std::vector<std::string>& hyp, const std::vector<std::string>& ref);
double token_f1(std::string_view hyp, std::string_view ref);

// Character n-gram F-score over UTF-8 code points with whitespace removed,
// precision and recall averaged over orders 1..max_order.
double chrf(std::string_view hyp, std::string_view ref, int max_order = 6, double beta = 2.0);

enum class QualityMetric { kTokenF1, kChrf };

double quality_proxy(std::string_view hyp, std::string_view ref,
                     QualityMetric metric = QualityMetric::kTokenF1);

// Paired bootstrap over segments. One-sided: the fraction of resampled
// segment sets in which mean(b) >= mean(a). Two-sided: twice the smaller
// tail of the resampled mean difference, capped at 1.
double paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                        int resamples = 1000, std::uint64_t seed = 1, bool two_sided = false);

}  // namespace qad
