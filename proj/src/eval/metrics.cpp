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

#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "core/error.hpp"
#include "core/vocabulary.hpp"

namespace qad {

namespace {

void check_pairs(const std::vector<double>& x, const std::vector<double>& y, const char* name) {
  if (x.size() != y.size()) {
    fail(ErrorKind::kInvalidArgument, std::string(name) + ": inputs differ in length");
  }
  if (x.size() < 2) fail(ErrorKind::kInvalidArgument, std::string(name) + ": need at least 2 pairs");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      fail(ErrorKind::kInvalidArgument, std::string(name) + ": non-finite score");
    }
  }
}

std::pair<std::vector<double>, std::vector<double>> unzip(const std::vector<SegmentScorePair>& pairs) {
  std::vector<double> x, y;
  for (const auto& p : pairs) {
    x.push_back(p.system);
    y.push_back(p.human);
  }
  return {x, y};
}

int sign(double v) { return (v > 0) - (v < 0); }

std::vector<std::string> code_points(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c >= 0xf0) len = 4;
    else if (c >= 0xe0) len = 3;
    else if (c >= 0xc0) len = 2;
    len = std::min(len, text.size() - i);
    if (!std::isspace(c)) out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::map<std::string, int> ngram_counts(const std::vector<std::string>& chars, int n) {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i + n <= chars.size(); ++i) {
    std::string g;
    for (int k = 0; k < n; ++k) g += chars[i + k];
    ++out[g];
  }
  return out;
}

}  // namespace

std::vector<SegmentScorePair> exclude_segments(const std::vector<SegmentScorePair>& pairs,
                                               const std::set<std::string>& excluded) {
  std::vector<SegmentScorePair> out;
  for (const auto& p : pairs) {
    if (!excluded.contains(p.segment_id)) out.push_back(p);
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  check_pairs(x, y, "pearson");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorKind::kInvalidArgument, "pearson: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  check_pairs(x, y, "spearman");
  try {
    return pearson(average_ranks(x), average_ranks(y));
  } catch (const Error&) {
    fail(ErrorKind::kInvalidArgument, "spearman: constant input");
  }
}

double kendall(const std::vector<double>& x, const std::vector<double>& y) {
  check_pairs(x, y, "kendall");
  // tau-b = (C - D) / sqrt((n0 - n1)(n0 - n2))
  long long concordant_minus_discordant = 0;
  long long untied_x = 0, untied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = sign(x[i] - x[j]);
      const int sy = sign(y[i] - y[j]);
      concordant_minus_discordant += sx * sy;
      untied_x += sx != 0;
      untied_y += sy != 0;
    }
  }
  if (untied_x == 0 || untied_y == 0) fail(ErrorKind::kInvalidArgument, "kendall: constant input");
  const double tau = static_cast<double>(concordant_minus_discordant) /
                     std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
  return std::clamp(tau, -1.0, 1.0);
}

double pearson(const std::vector<SegmentScorePair>& pairs) {
  auto [x, y] = unzip(pairs);
  return pearson(x, y);
}

double spearman(const std::vector<SegmentScorePair>& pairs) {
  auto [x, y] = unzip(pairs);
  return spearman(x, y);
}

double kendall(const std::vector<SegmentScorePair>& pairs) {
  auto [x, y] = unzip(pairs);
  return kendall(x, y);
}

double token_f1(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : ref) ++counts[t];
  int common = 0;
  for (const auto& t : hyp) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(common) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double token_f1(std::string_view hyp, std::string_view ref) {
  return token_f1(split_whitespace(hyp), split_whitespace(ref));
}

double chrf(std::string_view hyp, std::string_view ref, int max_order, double beta) {
  require(max_order >= 1 && beta > 0.0, "chrf: bad parameters");
  const auto h = code_points(hyp);
  const auto r = code_points(ref);
  if (h == r) return 1.0;
  double p_sum = 0.0, r_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_order; ++n) {
    const auto hc = ngram_counts(h, n);
    const auto rc = ngram_counts(r, n);
    if (hc.empty() || rc.empty()) continue;
    int h_total = 0, r_total = 0, common = 0;
    for (const auto& [g, c] : hc) {
      h_total += c;
      if (auto it = rc.find(g); it != rc.end()) common += std::min(c, it->second);
    }
    for (const auto& [g, c] : rc) r_total += c;
    p_sum += static_cast<double>(common) / h_total;
    r_sum += static_cast<double>(common) / r_total;
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double p = p_sum / orders;
  const double rc = r_sum / orders;
  if (p == 0.0 && rc == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * p * rc / (b2 * p + rc);
}

double quality_proxy(std::string_view hyp, std::string_view ref, QualityMetric metric) {
  return metric == QualityMetric::kChrf ? chrf(hyp, ref) : token_f1(hyp, ref);
}

double paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b, int resamples,
                        std::uint64_t seed, bool two_sided) {
  if (a.size() != b.size()) fail(ErrorKind::kInvalidArgument, "paired_bootstrap: length mismatch");
  require(a.size() >= 2, "paired_bootstrap: need at least 2 segments");
  require(resamples >= 1, "paired_bootstrap: resamples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
  int b_not_worse = 0, a_not_worse = 0;
  for (int r = 0; r < resamples; ++r) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t k = pick(rng);
      diff += a[k] - b[k];
    }
    b_not_worse += diff <= 0.0;
    a_not_worse += diff >= 0.0;
  }
  const double one = static_cast<double>(b_not_worse) / resamples;
  if (!two_sided) return one;
  const double other = static_cast<double>(a_not_worse) / resamples;
  return std::min(1.0, 2.0 * std::min(one, other));
}

}  // namespace qad
