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

// Runs the qad executable end to end. Files are written to the working
// directory under a cli_ prefix.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

using Json = nlohmann::ordered_json;

namespace {

const std::string kCli = QAD_CLI_PATH;
const std::string kData = QAD_TEST_DATA;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run qad(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp("cli_stdout.txt");
  r.err = slurp("cli_stderr.txt");
  return r;
}

std::string data(const std::string& name) { return "\"" + kData + "/" + name + "\""; }

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
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

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

// Trains the shared model once per process.
const std::string& lm_file() {
  static const std::string path = [] {
    const Run r = qad("train-lm --corpus " + data("toy_corpus.tsv") + " --out cli_lm.qad");
    REQUIRE(r.code == 0);
    return std::string("cli_lm.qad");
  }();
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(qad("--help").code == 0);
  CHECK(qad("--version").code == 0);
  CHECK(qad("").code == 1);
  CHECK(qad("frobnicate").code == 1);
  CHECK(qad("train-lm --corpus " + data("toy_corpus.tsv")).code == 1);  // --out missing
  CHECK(qad("decode --lm " + lm_file() + " --input " + data("toy_input.tsv") + " --bogus 1").code == 1);
  CHECK(qad("decode --lm " + lm_file() + " --input " + data("toy_input.tsv") + " --alpha 1.5").code == 1);
  CHECK(qad("decode --lm " + lm_file() + " --input " + data("toy_input.tsv") + " --search greedy").code == 1);
  const Run no_qe = qad("decode --lm " + lm_file() + " --input " + data("toy_input.tsv") + " --alpha 0.5");
  CHECK(no_qe.code == 1);
  CHECK(no_qe.err.find("QE") != std::string::npos);
  CHECK(qad("sweep --synthetic 4 --lm " + lm_file()).code == 1);
  CHECK(qad("compare --lm " + lm_file()).code == 1);
}

TEST_CASE("data errors exit with 2") {
  write("cli_bad_corpus.tsv", "a\tb\tc\n");
  CHECK(qad("train-lm --corpus cli_bad_corpus.tsv --out cli_never.qad").code == 2);
  write("cli_bad_mqm.tsv", "system\tdoc\tseg_id\tsource\ttarget\tcategory\tseverity\n"
                           "s\td\t1\tx\ta <v>b\tc\tMajor\n");
  const Run r = qad("annotate --input cli_bad_mqm.tsv --out cli_never.jsonl");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  write("cli_not_a_model.qad", "hello\n");
  CHECK(qad("decode --lm cli_not_a_model.qad --input " + data("toy_input.tsv")).code == 2);
  write("cli_noref.tsv", "das haus ist alt\n");
  CHECK(qad("compare --lm " + lm_file() + " --input cli_noref.tsv --strategies beam").code == 2);
}

TEST_CASE("annotate reproduces the golden labels") {
  const Run r = qad("annotate --input " + data("three_systems.tsv") + " --out cli_labels.jsonl");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["labels"]["MASK"] == 1);
  CHECK(slurp("cli_labels.jsonl") == slurp(kData + "/three_systems.golden.jsonl"));
}

TEST_CASE("beam search equals quality-aware search at alpha 1 without QE") {
  const std::string base = "decode --lm " + lm_file() + " --input " + data("toy_input.tsv");
  const Run beam = qad(base + " --search beam --max-len 12");
  const Run qa = qad(base + " --search qa --alpha 1 --qe none --max-len 12");
  REQUIRE(beam.code == 0);
  REQUIRE(qa.code == 0);
  const auto a = json_lines(beam.out), b = json_lines(qa.out);
  REQUIRE(a.size() == 5);
  REQUIRE(b.size() == 5);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i]["candidates"] == b[i]["candidates"]);
}

TEST_CASE("compare output is deterministic for a fixed seed") {
  const std::string cmd = "compare --synthetic 6 --strategies beam,qa --seed 7 --bootstrap-resamples 200";
  const Run one = qad(cmd);
  const Run two = qad(cmd);
  REQUIRE(one.code == 0);
  REQUIRE(two.code == 0);
  Json a = Json::parse(one.out), b = Json::parse(two.out);
  strip_wall_time(a);
  strip_wall_time(b);
  CHECK(a == b);
  CHECK(a["seeds"]["sampling"] == 7);
  CHECK(a["seeds"]["synthetic"] == 7);
  CHECK(a["per_segment"].size() == 6);
  CHECK(a["strategies"][1]["mean_quality"].get<double>() >= a["strategies"][0]["mean_quality"].get<double>());
}

TEST_CASE("flags override the config file, which overrides defaults") {
  write("cli_config.ini", "# decode settings\nalpha = 0.3\nnum-beams = 2\nqe = oracle\n");
  const Run r = qad("decode --config cli_config.ini --lm " + lm_file() + " --input " + data("toy_input.tsv") +
                    " --num-beams 3 --max-len 10");
  REQUIRE(r.code == 0);
  const auto lines = json_lines(r.out);
  const auto& cfg = lines.at(0)["qad_header"]["config"];
  CHECK(cfg["alpha"] == 0.3);
  CHECK(cfg["num_beams"] == 3);
  CHECK(cfg["topk"] == 5);
  CHECK(cfg["qe"] == "oracle");
  CHECK(lines.at(1)["config"]["num_beams"] == 3);

  write("cli_bad_config.ini", "alpah = 0.3\n");
  CHECK(qad("decode --config cli_bad_config.ini --lm " + lm_file() + " --input " + data("toy_input.tsv")).code ==
        1);
}

TEST_CASE("full pipeline through trained QE, rerank, MBR and sweep") {
  REQUIRE(qad("annotate --input " + data("toy_mqm.tsv") + " --tokenizer whitespace --out cli_toy.jsonl").code ==
          0);
  const Run trained = qad("train-qe --data cli_toy.jsonl --lm " + lm_file() + " --epochs 40 --out cli_qe.qad");
  REQUIRE(trained.code == 0);
  CHECK(Json::parse(trained.out)["examples"] == 8);

  const std::string io = " --lm " + lm_file() + " --input " + data("toy_input.tsv");
  const Run qa = qad("decode" + io + " --qe-model cli_qe.qad --alpha 0.5 --max-len 10 --out cli_qa.jsonl");
  REQUIRE(qa.code == 0);
  CHECK(qa.out.empty());
  const auto recs = json_lines(slurp("cli_qa.jsonl"));
  REQUIRE(recs.size() == 5);
  CHECK(recs[0]["qad_header"]["config"]["qe"] == "trained");
  CHECK(recs[1]["counters"]["qe_extend_calls"].get<int>() > 0);

  REQUIRE(qad("decode" + io + " --search beam --num-beams 6 --max-len 10 --out cli_nbest.jsonl").code == 0);
  const Run rr = qad("rerank --lm " + lm_file() + " --nbest cli_nbest.jsonl --alpha 0.5");
  REQUIRE(rr.code == 0);
  CHECK(json_lines(rr.out).size() == 5);

  const Run m1 = qad("mbr" + io + " --samples 5 --seed 3 --max-len 10");
  const Run m2 = qad("mbr" + io + " --samples 5 --seed 3 --max-len 10");
  REQUIRE(m1.code == 0);
  auto a = json_lines(m1.out), b = json_lines(m2.out);
  for (auto* v : {&a, &b}) {
    for (auto& j : *v) strip_wall_time(j);
  }
  CHECK(a == b);

  const Run sw = qad("sweep --synthetic 10 --seed 3 --alpha-grid 0,0.5,1");
  REQUIRE(sw.code == 0);
  const Json curve = Json::parse(sw.out)["curve"];
  REQUIRE(curve.size() == 3);
  CHECK(curve[0]["mean_quality"].get<double>() > curve[2]["mean_quality"].get<double>());
}
