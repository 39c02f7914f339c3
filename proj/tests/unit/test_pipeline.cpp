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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "pipeline/pipeline.hpp"
#include "test_util.hpp"

using namespace qad;
using qad::pipeline::Json;
using qad::testing::error_kind;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("QAD_TEST_DATA");
  return std::string(dir != nullptr ? dir : "tests/data") + "/" + name;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qad_pipeline_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }
};

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(Json::parse(line));
  return out;
}

void strip_wall_time(Json& j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [k, v] : j.items()) strip_wall_time(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_wall_time(v);
  }
}

std::unique_ptr<NgramTranslationScorer> toy_lm() {
  std::unique_ptr<NgramTranslationScorer> lm;
  pipeline::train_lm(data_path("toy_corpus.tsv"), Json::object(), &lm);
  return lm;
}

}  // namespace

TEST_CASE("options track reads, defaults and unknown keys") {
  pipeline::Options o(Json{{"alpha", 0.25}, {"typo", 1}});
  CHECK(o.real("alpha", 0.5) == 0.25);
  CHECK(o.integer("num_beams", 5) == 5);
  CHECK(o.resolved()["num_beams"] == 5);
  CHECK(error_kind([&] { o.finish(); }) == ErrorKind::kInvalidArgument);

  pipeline::Options types(Json{{"n", 1.5}, {"b", "yes"}, {"s", 3}});
  CHECK(error_kind([&] { types.integer("n", 0); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { types.boolean("b", false); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { types.text("s", ""); }) == ErrorKind::kInvalidArgument);
  CHECK(error_kind([] { pipeline::Options(Json::array()); }) == ErrorKind::kInvalidArgument);
  CHECK_NOTHROW(pipeline::Options(nullptr).finish());
}

TEST_CASE("training a translation model from a file") {
  std::unique_ptr<NgramTranslationScorer> lm;
  const Json summary = pipeline::train_lm(data_path("toy_corpus.tsv"), Json{{"order", 2}}, &lm);
  REQUIRE(lm);
  CHECK(summary["sentences"] == 12);
  CHECK(summary["config"]["order"] == 2);
  CHECK(summary["config"]["add_k"] == 1.0);
  CHECK(lm->options().order == 2);

  TempDir tmp;
  CHECK(error_kind([&] { pipeline::train_lm(data_path("toy_corpus.tsv"), Json{{"ordr", 2}}, &lm); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { pipeline::train_lm(tmp.file("missing.tsv"), Json::object(), &lm); }) ==
        ErrorKind::kIo);
  const auto no_target = tmp.write("nt.tsv", "a b\tx y\nc d\n");
  CHECK(error_kind([&] { pipeline::train_lm(no_target, Json::object(), &lm); }) == ErrorKind::kData);
  const auto empty = tmp.write("empty.tsv", "");
  CHECK(error_kind([&] { pipeline::train_lm(empty, Json::object(), &lm); }) == ErrorKind::kData);
}

TEST_CASE("annotate then train QE on the translation vocabulary") {
  TempDir tmp;
  const auto labeled = tmp.file("labeled.jsonl");
  const Json stats = pipeline::annotate(data_path("toy_mqm.tsv"), labeled, Json{{"tokenizer", "whitespace"}});
  CHECK(stats["records"] == 8);
  CHECK(stats["labels"]["BAD"] == 4);
  CHECK(stats["labels"]["MASK"] == 1);
  std::ifstream in(labeled);
  std::string first;
  std::getline(in, first);
  CHECK(Json::parse(first)["qad_header"]["config"]["tokenizer"] == "whitespace");

  const auto lm = toy_lm();
  std::unique_ptr<TokenQeClassifier> qe;
  const Json report = pipeline::train_qe(labeled, std::nullopt, lm->vocab_ptr(), Json{{"epochs", 50}}, &qe);
  REQUIRE(qe);
  CHECK(qe->vocab() == lm->vocab());
  CHECK(report["examples"] == 8);
  CHECK(report["labels"]["GOOD"] == 26);
  CHECK(report["labels"]["BAD"] == 4);
  CHECK(report["valid_macro_f1"].is_null());

  CHECK(error_kind([&] { pipeline::annotate(data_path("toy_mqm.tsv"), labeled, Json{{"tokenizer", "bpe"}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { pipeline::annotate(data_path("toy_mqm.tsv"), labeled, Json{{"chunk_chars", 0}}); }) ==
        ErrorKind::kInvalidArgument);
  const auto bad_mqm = tmp.write("bad.tsv", "system\tdoc\tseg_id\tsource\ttarget\tcategory\tseverity\n"
                                            "s\td\t1\tx\ta <v>b\tc\tMajor\n");
  CHECK(error_kind([&] { pipeline::annotate(bad_mqm, labeled, Json::object()); }) == ErrorKind::kData);
}

TEST_CASE("beam decoding equals quality-aware decoding at alpha 1 without QE") {
  const auto lm = toy_lm();
  const auto beam = json_lines(pipeline::decode(*lm, nullptr, data_path("toy_input.tsv"), Json{{"search", "beam"}}));
  const auto qa = json_lines(pipeline::decode(*lm, nullptr, data_path("toy_input.tsv"),
                                              Json{{"search", "qa"}, {"alpha", 1.0}, {"qe", "none"}}));
  REQUIRE(beam.size() == 5);
  REQUIRE(qa.size() == 5);
  CHECK(beam[0]["qad_header"]["command"] == "decode");
  for (std::size_t i = 1; i < beam.size(); ++i) {
    CHECK(beam[i]["candidates"] == qa[i]["candidates"]);
    CHECK(beam[i]["config"] == qa[i]["config"]);
    CHECK(beam[i]["reference"].is_string());
    CHECK(beam[i]["counters"]["qe_extend_calls"] == 0);
  }
}

TEST_CASE("decode option checks") {
  const auto lm = toy_lm();
  const auto input = data_path("toy_input.tsv");
  CHECK(error_kind([&] { pipeline::decode(*lm, nullptr, input, Json{{"alpha", 0.5}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { pipeline::decode(*lm, nullptr, input, Json{{"qe", "trained"}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { pipeline::decode(*lm, nullptr, input, Json{{"search", "greedy"}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] { pipeline::decode(*lm, nullptr, input, Json{{"num_beams", 0}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([&] {
          pipeline::decode(*lm, nullptr, input, Json{{"search", "exhaustive"}, {"alpha", 1.0}, {"max_len", 12}});
        }) == ErrorKind::kBudget);
  const auto oracle = json_lines(
      pipeline::decode(*lm, nullptr, input, Json{{"qe", "oracle"}, {"alpha", 0.5}, {"max_len", 10}}));
  for (std::size_t i = 1; i < oracle.size(); ++i) {
    CHECK(oracle[i]["counters"]["qe_extend_calls"].get<int>() > 0);
    CHECK(oracle[i]["candidates"].size() >= 1);
  }
}

TEST_CASE("re-ranking a decode output file") {
  TempDir tmp;
  const auto lm = toy_lm();
  const auto nbest = tmp.write("nbest.jsonl", pipeline::decode(*lm, nullptr, data_path("toy_input.tsv"),
                                                               Json{{"search", "beam"}, {"num_beams", 8}}));
  const auto out = json_lines(pipeline::rerank(*lm, nullptr, nbest, Json{{"alpha", 0.0}}));
  REQUIRE(out.size() == 5);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const auto& cands = out[i]["candidates"];
    REQUIRE(cands.size() >= 1);
    CHECK(out[i]["counters"]["qe_sequence_calls"] == cands.size());
    for (std::size_t k = 1; k < cands.size(); ++k) {
      CHECK(cands[k - 1]["merged"].get<double>() >= cands[k]["merged"].get<double>());
    }
  }
  const auto junk = tmp.write("junk.jsonl", "{\"source\": \"das haus\", \"candidates\": [{\"tokens\": [\"zebra\"], "
                                            "\"nmt_logprobs\": [-1]}]}\n");
  CHECK(error_kind([&] { pipeline::rerank(*lm, nullptr, junk, Json::object()); }) == ErrorKind::kData);
  const auto broken = tmp.write("broken.jsonl", "{not json\n");
  CHECK(error_kind([&] { pipeline::rerank(*lm, nullptr, broken, Json::object()); }) == ErrorKind::kData);
  CHECK(error_kind([&] { pipeline::rerank(*lm, nullptr, nbest, Json{{"qe", "none"}}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("MBR output is seeded") {
  const auto lm = toy_lm();
  const Json opts{{"count", 6}, {"seed", 4}, {"max_len", 10}};
  auto a = json_lines(pipeline::mbr(*lm, data_path("toy_input.tsv"), opts));
  auto b = json_lines(pipeline::mbr(*lm, data_path("toy_input.tsv"), opts));
  for (auto* v : {&a, &b}) {
    for (auto& j : *v) strip_wall_time(j);
  }
  CHECK(a == b);
  REQUIRE(a.size() == 5);
  CHECK(a[1]["samples"].size() == 6);
  CHECK(a[1]["candidates"][0] == a[1]["samples"][a[1]["selected_index"].get<std::size_t>()]);
  CHECK(error_kind([&] { pipeline::mbr(*lm, data_path("toy_input.tsv"), Json{{"count", 0}}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("synthetic sweep favours some alpha below 1") {
  const Json j = pipeline::sweep(nullptr, nullptr, std::nullopt, Json{{"synthetic", {{"seed", 3}}}});
  const auto& curve = j["curve"];
  REQUIRE(curve.size() == 11);
  const double at_one = curve.back()["mean_quality"].get<double>();
  double best_below = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    best_below = std::max(best_below, curve[i]["mean_quality"].get<double>());
  }
  CHECK(best_below > at_one);
  CHECK(j["seeds"]["synthetic"] == 3);
  CHECK(error_kind([] { pipeline::sweep(nullptr, nullptr, std::nullopt, Json::object()); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(error_kind([] {
          pipeline::sweep(nullptr, nullptr, std::nullopt, Json{{"synthetic", {{"sed", 3}}}});
        }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("compare reports are reproducible") {
  const Json opts{{"strategies", {"beam", "qa"}}, {"seed", 7}, {"synthetic", {{"seed", 2}}},
                  {"max_len", 24}, {"bootstrap_resamples", 200}};
  Json a = pipeline::compare(nullptr, nullptr, std::nullopt, opts);
  Json b = pipeline::compare(nullptr, nullptr, std::nullopt, opts);
  strip_wall_time(a);
  strip_wall_time(b);
  CHECK(a == b);
  CHECK(a["strategies"].size() == 2);
  CHECK(a["pairwise_p"]["order"] == Json{"beam", "qa"});
  CHECK(a["seeds"]["bootstrap"] == 7);
  CHECK(a["per_segment"].size() == 8);

  const auto lm = toy_lm();
  CHECK(error_kind([&] {
          pipeline::compare(lm.get(), nullptr, data_path("toy_input.tsv"), Json{{"strategies", {"beam", "nope"}}});
        }) == ErrorKind::kInvalidArgument);
  TempDir tmp;
  const auto no_ref = tmp.write("noref.tsv", "das haus ist alt\n");
  CHECK(error_kind([&] { pipeline::compare(lm.get(), nullptr, no_ref, Json::object()); }) == ErrorKind::kData);
  const Json file_run = pipeline::compare(lm.get(), nullptr, data_path("toy_input.tsv"),
                                          Json{{"strategies", {"beam", "beam_rerank", "qa"}},
                                               {"max_len", 10}, {"bootstrap_resamples", 100}});
  CHECK(file_run["per_segment"].size() == 4);
}
