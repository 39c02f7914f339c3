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

// MQM error-span data to token labels.
//
// Input rows are TSV with a header naming at least the columns
//   system doc seg_id source target category severity
// and optionally `tokens`. Error spans are marked inline in `target` as
// <v>...</v>. Offsets are byte offsets into the UTF-8 target with the
// markers removed.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/labels.hpp"

namespace qad {

struct Span {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct MqmRecord {
  std::string system;
  std::string doc;
  std::string seg_id;
  std::string source;
  std::string target_raw;
  std::string target_clean;
  std::vector<Span> spans;
  std::vector<std::string> severity;  // one per span
  std::vector<std::string> category;  // one per span
  std::string row_severity;
  std::string row_category;
  std::optional<std::string> tokens;  // explicit target tokenization
  bool source_has_spans = false;      // such records are skipped by annotate
  std::size_t line = 0;
};

struct MqmHeader {
  std::size_t system = 0, doc = 1, seg_id = 2, source = 3, target = 4, category = 5, severity = 6;
  std::optional<std::size_t> tokens;
  std::size_t columns = 7;

  static MqmHeader parse(std::string_view header_line);
};

// Removes <v>...</v> markers; returns the clean text and the marked spans.
// Throws kData naming `line` on unbalanced or nested markers.
std::pair<std::string, std::vector<Span>> strip_markers(std::string_view raw, std::size_t line);

MqmRecord parse_mqm(std::string_view line, const MqmHeader& header = {}, std::size_t lineno = 1);

// Union of overlapping or touching spans, sorted.
std::vector<Span> merge_spans(std::vector<Span> spans);

// A token belongs to a span when their character ranges overlap. Within each
// merged span the last overlapping token is BAD and the others are MASK;
// tokens outside every span are GOOD.
std::vector<TokenLabel> label_tokens(const MqmRecord& record, const std::vector<Span>& token_offsets);

// Tokenizers producing offsets into `text`.
std::vector<Span> whitespace_offsets(std::string_view text);
// Whitespace tokens further cut into pieces of at most `max_chars` code points.
std::vector<Span> chunk_offsets(std::string_view text, std::size_t max_chars);
// Places explicit `tokens` left to right on `text`, skipping whitespace.
std::vector<Span> align_tokens(std::string_view text, const std::vector<std::string>& tokens);

std::vector<std::string> slice(std::string_view text, const std::vector<Span>& offsets);

struct TokenizerOptions {
  enum class Kind { kWhitespace, kChunk } kind = Kind::kChunk;
  std::size_t chunk_chars = 3;
};

std::vector<Span> tokenize_offsets(std::string_view text, const TokenizerOptions& options);

struct AnnotateStats {
  std::size_t rows = 0;
  std::size_t records = 0;   // after grouping rows of the same segment
  std::size_t skipped_source_spans = 0;
  std::size_t good = 0, bad = 0, mask = 0;
};

// Reads an MQM TSV stream, groups rows that share (system, doc, seg_id) and
// the same clean target, and labels each group.
std::vector<LabeledExample> annotate_stream(std::istream& in, const TokenizerOptions& options,
                                            AnnotateStats* stats = nullptr);

// JSON-lines LabeledExample I/O: {"source_tokens", "target_tokens",
// "labels"}. An optional first line {"qad_header": {...}} is skipped on read.
void write_labeled(std::ostream& out, const std::vector<LabeledExample>& examples,
                   const std::string* header_json = nullptr);
std::vector<LabeledExample> read_labeled(std::istream& in);
std::vector<LabeledExample> read_labeled_file(const std::string& path);

}  // namespace qad
