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

#include "annotation/mqm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/vocabulary.hpp"

namespace qad {

namespace {

constexpr std::string_view kOpen = "<v>";
constexpr std::string_view kClose = "</v>";

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::kData, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (true) {
    const auto j = line.find('\t', i);
    if (j == std::string_view::npos) {
      out.push_back(line.substr(i));
      return out;
    }
    out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Byte length of the UTF-8 sequence starting with `lead`.
std::size_t utf8_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // stray continuation byte
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

MqmHeader MqmHeader::parse(std::string_view header_line) {
  if (!header_line.empty() && header_line.back() == '\r') header_line.remove_suffix(1);
  const auto cols = split_tabs(header_line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cols.size(); ++i) index[lower(cols[i])] = i;
  MqmHeader h;
  auto need = [&](const char* name) {
    auto it = index.find(name);
    if (it == index.end()) line_error(1, std::string("missing column '") + name + "'");
    return it->second;
  };
  h.system = need("system");
  h.doc = need("doc");
  h.seg_id = need("seg_id");
  h.source = need("source");
  h.target = need("target");
  h.category = need("category");
  h.severity = need("severity");
  if (auto it = index.find("tokens"); it != index.end()) h.tokens = it->second;
  h.columns = cols.size();
  return h;
}

std::pair<std::string, std::vector<Span>> strip_markers(std::string_view raw, std::size_t line) {
  std::string clean;
  std::vector<Span> spans;
  std::optional<std::size_t> open;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw.substr(i, kOpen.size()) == kOpen) {
      if (open) line_error(line, "nested <v> marker");
      open = clean.size();
      i += kOpen.size();
    } else if (raw.substr(i, kClose.size()) == kClose) {
      if (!open) line_error(line, "</v> without matching <v>");
      if (clean.size() > *open) spans.push_back({*open, clean.size()});
      open.reset();
      i += kClose.size();
    } else {
      clean += raw[i++];
    }
  }
  if (open) line_error(line, "unclosed <v> marker");
  return {std::move(clean), std::move(spans)};
}

MqmRecord parse_mqm(std::string_view line, const MqmHeader& header, std::size_t lineno) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto cols = split_tabs(line);
  if (cols.size() < header.columns) {
    line_error(lineno, "expected " + std::to_string(header.columns) + " columns, found " +
                           std::to_string(cols.size()));
  }
  MqmRecord r;
  r.line = lineno;
  r.system = cols[header.system];
  r.doc = cols[header.doc];
  r.seg_id = cols[header.seg_id];
  r.row_category = cols[header.category];
  r.row_severity = cols[header.severity];
  auto [src_clean, src_spans] = strip_markers(cols[header.source], lineno);
  r.source = std::move(src_clean);
  r.source_has_spans = !src_spans.empty();
  r.target_raw = cols[header.target];
  auto [clean, spans] = strip_markers(r.target_raw, lineno);
  r.target_clean = std::move(clean);
  if (lower(r.row_severity) != "no-error") r.spans = std::move(spans);
  r.severity.assign(r.spans.size(), r.row_severity);
  r.category.assign(r.spans.size(), r.row_category);
  if (header.tokens && !split_whitespace(cols[*header.tokens]).empty()) {
    r.tokens = std::string(cols[*header.tokens]);
  }
  return r;
}

std::vector<Span> merge_spans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  std::vector<Span> out;
  for (const auto& s : spans) {
    if (!out.empty() && s.start <= out.back().end) {
      out.back().end = std::max(out.back().end, s.end);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<TokenLabel> label_tokens(const MqmRecord& record, const std::vector<Span>& token_offsets) {
  const std::size_t len = record.target_clean.size();
  for (const auto& t : token_offsets) {
    if (t.start >= t.end || t.end > len) {
      fail(ErrorKind::kInvalidArgument, "label_tokens: token offsets out of bounds");
    }
  }
  for (const auto& s : record.spans) {
    if (s.end > len || s.start > s.end) {
      fail(ErrorKind::kInvalidArgument, "label_tokens: span outside target");
    }
  }
  std::vector<TokenLabel> labels(token_offsets.size(), TokenLabel::kGood);
  for (const auto& span : merge_spans(record.spans)) {
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < token_offsets.size(); ++i) {
      const auto& t = token_offsets[i];
      if (t.start < span.end && span.start < t.end) {
        if (labels[i] != TokenLabel::kBad) labels[i] = TokenLabel::kMask;
        if (!last || token_offsets[*last].start < t.start) last = i;
      }
    }
    if (last) labels[*last] = TokenLabel::kBad;
  }
  return labels;
}

std::vector<Span> whitespace_offsets(std::string_view text) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back({i, j});
    i = j;
  }
  return out;
}

std::vector<Span> chunk_offsets(std::string_view text, std::size_t max_chars) {
  require(max_chars >= 1, "chunk_offsets: chunk length must be >= 1");
  std::vector<Span> out;
  for (const auto& word : whitespace_offsets(text)) {
    std::size_t i = word.start;
    while (i < word.end) {
      std::size_t j = i;
      for (std::size_t c = 0; c < max_chars && j < word.end; ++c) {
        j = std::min(word.end, j + utf8_len(static_cast<unsigned char>(text[j])));
      }
      out.push_back({i, j});
      i = j;
    }
  }
  return out;
}

std::vector<Span> align_tokens(std::string_view text, const std::vector<std::string>& tokens) {
  std::vector<Span> out;
  std::size_t i = 0;
  for (const auto& tok : tokens) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (tok.empty() || text.substr(i, tok.size()) != tok) {
      fail(ErrorKind::kData, "token '" + tok + "' does not match the target text at offset " +
                                 std::to_string(i));
    }
    out.push_back({i, i + tok.size()});
    i += tok.size();
  }
  while (i < text.size() && is_space(text[i])) ++i;
  if (i != text.size()) fail(ErrorKind::kData, "explicit tokens do not cover the target text");
  return out;
}

std::vector<std::string> slice(std::string_view text, const std::vector<Span>& offsets) {
  std::vector<std::string> out;
  for (const auto& s : offsets) out.emplace_back(text.substr(s.start, s.end - s.start));
  return out;
}

std::vector<Span> tokenize_offsets(std::string_view text, const TokenizerOptions& options) {
  return options.kind == TokenizerOptions::Kind::kWhitespace ? whitespace_offsets(text)
                                                             : chunk_offsets(text, options.chunk_chars);
}

std::vector<LabeledExample> annotate_stream(std::istream& in, const TokenizerOptions& options,
                                            AnnotateStats* stats) {
  AnnotateStats local;
  std::string line;
  if (!std::getline(in, line)) return {};
  const MqmHeader header = MqmHeader::parse(line);

  std::vector<MqmRecord> groups;
  std::map<std::tuple<std::string, std::string, std::string, std::string>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (split_whitespace(line).empty()) continue;
    ++local.rows;
    MqmRecord r = parse_mqm(line, header, lineno);
    if (r.source_has_spans) {
      ++local.skipped_source_spans;
      continue;
    }
    auto key = std::make_tuple(r.system, r.doc, r.seg_id, r.target_clean);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), groups.size());
      groups.push_back(std::move(r));
    } else {
      MqmRecord& g = groups[it->second];
      g.spans.insert(g.spans.end(), r.spans.begin(), r.spans.end());
      g.severity.insert(g.severity.end(), r.severity.begin(), r.severity.end());
      g.category.insert(g.category.end(), r.category.begin(), r.category.end());
      if (!g.tokens) g.tokens = r.tokens;
    }
  }

  std::vector<LabeledExample> out;
  for (const auto& g : groups) {
    const auto offsets = g.tokens ? align_tokens(g.target_clean, split_whitespace(*g.tokens))
                                  : tokenize_offsets(g.target_clean, options);
    LabeledExample ex;
    ex.source_tokens = slice(g.source, tokenize_offsets(g.source, options));
    ex.target_tokens = slice(g.target_clean, offsets);
    ex.labels = label_tokens(g, offsets);
    for (auto l : ex.labels) {
      if (l == TokenLabel::kGood) ++local.good;
      if (l == TokenLabel::kBad) ++local.bad;
      if (l == TokenLabel::kMask) ++local.mask;
    }
    out.push_back(std::move(ex));
  }
  local.records = out.size();
  if (stats != nullptr) *stats = local;
  return out;
}

void write_labeled(std::ostream& out, const std::vector<LabeledExample>& examples,
                   const std::string* header_json) {
  if (header_json != nullptr) out << *header_json << '\n';
  for (const auto& ex : examples) {
    nlohmann::ordered_json j;
    j["source_tokens"] = ex.source_tokens;
    j["target_tokens"] = ex.target_tokens;
    auto& labels = j["labels"] = nlohmann::ordered_json::array();
    for (auto l : ex.labels) labels.push_back(std::string(label_name(l)));
    out << j.dump() << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "failed writing labeled examples");
}

std::vector<LabeledExample> read_labeled(std::istream& in) {
  std::vector<LabeledExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (split_whitespace(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      line_error(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (j.contains("qad_header")) continue;
    try {
      LabeledExample ex;
      ex.source_tokens = j.at("source_tokens").get<std::vector<std::string>>();
      ex.target_tokens = j.at("target_tokens").get<std::vector<std::string>>();
      for (const auto& s : j.at("labels")) {
        auto l = parse_label(s.get<std::string>());
        if (!l) line_error(lineno, "unknown label '" + s.get<std::string>() + "'");
        ex.labels.push_back(*l);
      }
      if (ex.labels.size() != ex.target_tokens.size()) {
        line_error(lineno, "label count differs from target length");
      }
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      line_error(lineno, std::string("bad labeled example: ") + e.what());
    }
  }
  return out;
}

std::vector<LabeledExample> read_labeled_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return read_labeled(in);
}

}  // namespace qad
