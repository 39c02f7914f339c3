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

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "annotation/mqm.hpp"
#include "test_util.hpp"

using namespace qad;
using qad::testing::error_kind;

namespace {

constexpr auto G = TokenLabel::kGood;
constexpr auto B = TokenLabel::kBad;
constexpr auto M = TokenLabel::kMask;

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("QAD_TEST_DATA");
  return std::string(dir != nullptr ? dir : "tests/data") + "/" + name;
}

MqmRecord record(std::string clean, std::vector<Span> spans) {
  MqmRecord r;
  r.target_clean = std::move(clean);
  r.spans = std::move(spans);
  return r;
}

std::string row(const std::string& target, const std::string& severity = "Minor",
                const std::string& source = "src") {
  return "sys\tdoc\t1\t" + source + "\t" + target + "\tcat\t" + severity;
}

bool overlaps(const Span& t, const Span& s) { return t.start < s.end && s.start < t.end; }

// Random text over a small alphabet with single spaces between words.
std::string random_text(std::mt19937_64& rng, std::size_t words) {
  std::uniform_int_distribution<int> len(1, 7), ch(0, 5);
  std::string out;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) out += ' ';
    for (int i = len(rng); i > 0; --i) out += static_cast<char>('a' + ch(rng));
  }
  return out;
}

std::vector<Span> random_spans(std::mt19937_64& rng, const std::string& text) {
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
  std::vector<Span> out;
  for (int i = count(rng); i > 0; --i) {
    std::size_t a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    if (text[a] == ' ') continue;
    out.push_back({a, std::max(b, a + 1)});
  }
  return out;
}

std::string with_markers(const std::string& clean, const std::vector<Span>& disjoint) {
  std::string out;
  std::size_t i = 0;
  for (const auto& s : disjoint) {
    out += clean.substr(i, s.start - i) + "<v>" + clean.substr(s.start, s.end - s.start) + "</v>";
    i = s.end;
  }
  return out + clean.substr(i);
}

}  // namespace

TEST_CASE("markers become character spans into the clean target") {
  const auto r = parse_mqm(row("I <v>played</v> Tennis"));
  CHECK(r.target_clean == "I played Tennis");
  REQUIRE(r.spans.size() == 1);
  CHECK(r.spans[0] == Span{2, 8});
  CHECK(r.severity == std::vector<std::string>{"Minor"});

  CHECK(parse_mqm(row("I play Tennis", "no-error")).spans.empty());
  CHECK(parse_mqm(row("a <v>b</v> c", "No-error")).spans.empty());

  const auto two = parse_mqm(row("<v>ab</v> cd <v>ef</v>"));
  CHECK(two.target_clean == "ab cd ef");
  CHECK(two.spans == std::vector<Span>{{0, 2}, {6, 8}});

  CHECK(parse_mqm(row("x <v></v>y")).spans.empty());
  CHECK(parse_mqm(row("t", "Major", "a <v>b</v>")).source_has_spans);
}

TEST_CASE("unbalanced markers report the line") {
  for (const std::string bad : {"a <v>b", "a </v>b", "<v>a <v>b</v></v>"}) {
    try {
      parse_mqm(row(bad), {}, 7);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kData);
      CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
  }
  CHECK(error_kind([] { parse_mqm("too\tfew\tcolumns"); }) == ErrorKind::kData);
  CHECK(error_kind([] { MqmHeader::parse("system\tdoc\tsource"); }) == ErrorKind::kData);
}

TEST_CASE("header columns are located by name") {
  const auto h = MqmHeader::parse("Target\tsystem\tdoc\tseg_id\tsource\tseverity\tcategory");
  CHECK(h.target == 0);
  CHECK(h.severity == 5);
  CHECK_FALSE(h.tokens.has_value());
  const auto r = parse_mqm("<v>x</v> y\ts\td\t3\tsrc\tMajor\tcat", h);
  CHECK(r.seg_id == "3");
  CHECK(r.spans == std::vector<Span>{{0, 1}});
}

TEST_CASE("span merging") {
  CHECK(merge_spans({{2, 8}}) == std::vector<Span>{{2, 8}});
  CHECK(merge_spans({{2, 8}, {5, 10}}) == std::vector<Span>{{2, 10}});
  CHECK(merge_spans({{9, 12}, {3, 5}, {0, 3}}) == std::vector<Span>{{0, 5}, {9, 12}});
  CHECK(merge_spans({}).empty());
  CHECK(merge_spans({{0, 10}, {2, 3}}) == std::vector<Span>{{0, 10}});
}

TEST_CASE("three labeling cases on explicit tokens") {
  const std::string t1 = "I play Tennis";
  CHECK(label_tokens(record(t1, {}), align_tokens(t1, {"I", "play", "Tennis"})) ==
        std::vector<TokenLabel>{G, G, G});
  const std::string t2 = "I played Tennis";
  CHECK(label_tokens(record(t2, {{2, 8}}), align_tokens(t2, {"I", "pla", "yed", "Tennis"})) ==
        std::vector<TokenLabel>{G, M, B, G});
  const std::string t3 = "I enjoy Tennis";
  CHECK(label_tokens(record(t3, {{2, 7}}), align_tokens(t3, {"I", "enjoy", "Tennis"})) ==
        std::vector<TokenLabel>{G, B, G});
}

TEST_CASE("labeling rejects out-of-range offsets") {
  CHECK(error_kind([] { label_tokens(record("abc", {}), {{0, 4}}); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { label_tokens(record("abc", {{1, 9}}), {{0, 3}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { align_tokens("I played", {"I", "pl", "yed"}); }) == ErrorKind::kData);
  CHECK(error_kind([] { align_tokens("I played", {"I"}); }) == ErrorKind::kData);
}

TEST_CASE("tokenizers produce offsets into the text") {
  CHECK(whitespace_offsets("  ab  c ") == std::vector<Span>{{2, 4}, {6, 7}});
  CHECK(chunk_offsets("played it", 3) == std::vector<Span>{{0, 3}, {3, 6}, {7, 9}});
  // "über" is five bytes and four code points.
  CHECK(chunk_offsets("\xc3\xbc" "ber", 2) == std::vector<Span>{{0, 3}, {3, 5}});
  CHECK(slice("played it", chunk_offsets("played it", 3)) == std::vector<std::string>{"pla", "yed", "it"});
}

TEST_CASE("label properties hold on random spans and tokenizations") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string text = random_text(rng, 1 + trial % 6);
    const auto spans = random_spans(rng, text);
    const auto merged = merge_spans(spans);
    const auto r = record(text, spans);
    for (std::size_t chunk : {1, 2, 3, 100}) {
      const auto offsets = chunk_offsets(text, chunk);
      const auto labels = label_tokens(r, offsets);
      REQUIRE(labels.size() == offsets.size());
      std::size_t bad = 0;
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        bool in_span = false;
        for (const auto& s : merged) in_span = in_span || overlaps(offsets[i], s);
        if (!in_span) CHECK(labels[i] == G);
        if (in_span) CHECK(labels[i] != G);
        bad += labels[i] == B;
      }
      // Each merged span marks its last overlapping token.
      for (const auto& s : merged) {
        std::size_t last = offsets.size();
        for (std::size_t i = 0; i < offsets.size(); ++i) {
          if (overlaps(offsets[i], s)) last = i;
        }
        REQUIRE(last < offsets.size());
        CHECK(labels[last] == B);
      }
      // Single-character tokens give every merged span its own BAD.
      if (chunk == 1) CHECK(bad == merged.size());
      CHECK(bad <= merged.size());
    }
  }
}

TEST_CASE("word-aligned spans keep their BAD count under any granularity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = random_text(rng, 6);
    const auto words = whitespace_offsets(text);
    // Pick disjoint, non-adjacent word ranges.
    std::vector<Span> spans;
    for (std::size_t w = 0; w < words.size(); w += 2) {
      if (rng() % 2 == 0) spans.push_back({words[w].start, words[w].end});
    }
    std::vector<std::size_t> bad_words_ref;
    for (std::size_t chunk : {1, 2, 3, 100}) {
      const auto offsets = chunk_offsets(text, chunk);
      const auto labels = label_tokens(record(text, spans), offsets);
      std::vector<std::size_t> bad_words;
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (labels[i] != B) continue;
        for (std::size_t w = 0; w < words.size(); ++w) {
          if (overlaps(offsets[i], words[w])) bad_words.push_back(w);
        }
      }
      CHECK(bad_words.size() == spans.size());
      if (chunk == 1) bad_words_ref = bad_words;
      CHECK(bad_words == bad_words_ref);
    }
  }
}

TEST_CASE("labels do not depend on how the spans were marked") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = random_text(rng, 4);
    const auto merged = merge_spans(random_spans(rng, text));
    const auto parsed = parse_mqm(row(with_markers(text, merged)));
    REQUIRE(parsed.target_clean == text);
    const auto offsets = chunk_offsets(text, 3);
    CHECK(label_tokens(parsed, offsets) == label_tokens(record(text, merged), offsets));
  }
}

TEST_CASE("annotating the three-system file") {
  std::ifstream in(data_path("three_systems.tsv"));
  REQUIRE(in);
  AnnotateStats stats;
  const auto ex = annotate_stream(in, TokenizerOptions{}, &stats);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].labels == std::vector<TokenLabel>{G, G, G});
  CHECK(ex[1].target_tokens == std::vector<std::string>{"I", "pla", "yed", "Tennis"});
  CHECK(ex[1].labels == std::vector<TokenLabel>{G, M, B, G});
  CHECK(ex[2].labels == std::vector<TokenLabel>{G, B, G});
  CHECK(stats.rows == 3);
  CHECK(stats.good == 7);
  CHECK(stats.bad == 2);
  CHECK(stats.mask == 1);
}

TEST_CASE("rows of one segment are grouped and source spans skipped") {
  std::stringstream in;
  in << "system\tdoc\tseg_id\tsource\ttarget\tcategory\tseverity\n"
     << row("<v>aa</v> bb cc") << "\n"
     << row("aa bb <v>cc</v>") << "\n"
     << "\n"
     << row("aa bb cc", "Major", "<v>s</v>") << "\n"
     << row("dd ee", "no-error") << "\n";
  TokenizerOptions ws;
  ws.kind = TokenizerOptions::Kind::kWhitespace;
  AnnotateStats stats;
  const auto ex = annotate_stream(in, ws, &stats);
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].labels == std::vector<TokenLabel>{B, G, B});
  CHECK(ex[1].labels == std::vector<TokenLabel>{G, G});
  CHECK(stats.rows == 4);
  CHECK(stats.records == 2);
  CHECK(stats.skipped_source_spans == 1);
}

TEST_CASE("labeled JSON lines round trip") {
  std::vector<LabeledExample> ex(2);
  ex[0] = {{"a", "b"}, {"x", "y", "z"}, {G, M, B}};
  ex[1] = {{"c"}, {"\xc3\xbc", "w"}, {B, G}};
  std::stringstream buf;
  write_labeled(buf, ex);
  CHECK(read_labeled(buf) == ex);

  std::stringstream empty;
  write_labeled(empty, {});
  CHECK(empty.str().empty());
  CHECK(read_labeled(empty).empty());

  std::stringstream bad("{\"source_tokens\":[],\"target_tokens\":[\"a\"],\"labels\":[]}\n");
  CHECK(error_kind([&] { read_labeled(bad); }) == ErrorKind::kData);
  std::stringstream unknown("{\"source_tokens\":[],\"target_tokens\":[\"a\"],\"labels\":[\"OK\"]}\n");
  CHECK(error_kind([&] { read_labeled(unknown); }) == ErrorKind::kData);
}

TEST_CASE("file label histogram matches memory") {
  std::ifstream in(data_path("three_systems.tsv"));
  const auto ex = annotate_stream(in, TokenizerOptions{});
  std::map<TokenLabel, int> mem;
  for (const auto& e : ex) {
    for (auto l : e.labels) ++mem[l];
  }
  std::stringstream buf;
  const std::string header = R"({"qad_header":{"command":"annotate"}})";
  write_labeled(buf, ex, &header);
  std::map<std::string, int> file;
  std::string line;
  int lines = 0;
  while (std::getline(buf, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("qad_header")) continue;
    ++lines;
    for (const auto& l : j.at("labels")) ++file[l.get<std::string>()];
  }
  CHECK(lines == 3);
  CHECK(file["GOOD"] == mem[G]);
  CHECK(file["BAD"] == mem[B]);
  CHECK(file["MASK"] == mem[M]);
}
