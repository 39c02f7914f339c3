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

#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "annotation/mqm.hpp"
#include "core/error.hpp"
#include "decoding/decoders.hpp"
#include "eval/constructed.hpp"
#include "eval/experiments.hpp"
#include "scorers/corpus.hpp"
#include "scorers/oracle_qe.hpp"

namespace qad::pipeline {

namespace {

[[noreturn]] void bad_option(const std::string& what) { fail(ErrorKind::kInvalidArgument, what); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return in;
}

Json header_line(const char* command, const Json& config, const Json& seeds) {
  Json h;
  h["command"] = command;
  h["config"] = config;
  h["seeds"] = seeds;
  Json line;
  line["qad_header"] = std::move(h);
  return line;
}

DecodeConfig read_decode_config(Options& o, bool with_alpha = true) {
  DecodeConfig c;
  if (with_alpha) c.alpha = o.real("alpha", c.alpha);
  c.num_beams = static_cast<int>(o.integer("num_beams", c.num_beams));
  c.topk = static_cast<int>(o.integer("topk", c.topk));
  c.max_len = static_cast<int>(o.integer("max_len", c.max_len));
  c.logprob_floor = o.real("logprob_floor", c.logprob_floor);
  c.include_eos_in_qe = o.boolean("include_eos_in_qe", c.include_eos_in_qe);
  c.validate();
  return c;
}

Json config_json(const DecodeConfig& c) {
  Json j;
  j["alpha"] = c.alpha;
  j["num_beams"] = c.num_beams;
  j["topk"] = c.topk;
  j["max_len"] = c.max_len;
  j["logprob_floor"] = c.logprob_floor;
  j["include_eos_in_qe"] = c.include_eos_in_qe;
  return j;
}

Json counters_json(const CostCounters& c) {
  Json j;
  j["nmt_distribution_calls"] = c.nmt_distribution_calls;
  j["qe_extend_calls"] = c.qe_extend_calls;
  j["qe_sequence_calls"] = c.qe_sequence_calls;
  j["merged_evaluations"] = c.merged_evaluations;
  j["steps"] = c.steps;
  j["wall_time"] = c.wall_time;
  return j;
}

Json candidate_json(const Vocabulary& v, const ScoredEntry& e) {
  Json j;
  Json tokens = Json::array();
  for (TokenId t : e.hyp.tokens) tokens.push_back(v.token(t));
  j["tokens"] = std::move(tokens);
  j["text"] = v.decode(e.hyp.tokens);
  j["score_nmt"] = e.score_nmt;
  j["score_qe"] = e.score_qe;
  j["merged"] = e.merged;
  j["finished"] = e.hyp.finished;
  j["nmt_logprobs"] = e.hyp.nmt_logprobs;
  j["qe_good_logprobs"] = e.hyp.qe_good_logprobs;
  return j;
}

Json nbest_json(const Vocabulary& v, const ScoredNBest& nbest) {
  Json out = Json::array();
  for (const auto& e : nbest.entries) out.push_back(candidate_json(v, e));
  return out;
}

struct InputLine {
  std::string source_text;
  std::optional<std::string> reference_text;
  Segment segment;
};

std::vector<InputLine> read_inputs(const Vocabulary& vocab, const std::string& path) {
  std::vector<InputLine> out;
  for (const auto& pair : read_parallel_corpus_file(path)) {
    InputLine line;
    line.source_text = pair.source;
    line.segment.id = std::to_string(out.size() + 1);
    line.segment.source = vocab.encode(pair.source);
    if (pair.has_target) {
      line.reference_text = pair.target;
      line.segment.reference = vocab.encode(pair.target);
    }
    out.push_back(std::move(line));
  }
  return out;
}

Json segment_head(const InputLine& line) {
  Json j;
  j["id"] = line.segment.id;
  j["source"] = line.source_text;
  if (line.reference_text) j["reference"] = *line.reference_text;
  return j;
}

// Which QE scorer a command uses and how to get one per segment.
struct QeChoice {
  std::string kind;  // none | oracle | trained
  double p_match = OracleQeScorer::kDefaultMatch;
  double p_miss = OracleQeScorer::kDefaultMiss;

  static QeChoice read(Options& o, const QeScorer* trained, const char* fallback) {
    QeChoice q;
    q.kind = o.text("qe", trained != nullptr ? "trained" : fallback);
    if (q.kind != "none" && q.kind != "oracle" && q.kind != "trained") {
      bad_option("qe must be one of none, oracle, trained");
    }
    if (q.kind == "trained" && trained == nullptr) bad_option("qe=trained needs a QE model");
    if (q.kind == "oracle") {
      q.p_match = o.real("p_match", q.p_match);
      q.p_miss = o.real("p_miss", q.p_miss);
    }
    return q;
  }

  QeFactory factory(const Vocabulary& vocab, const QeScorer* trained) const {
    if (kind == "oracle") return oracle_qe_factory(VocabPtr(VocabPtr(), &vocab), p_match, p_miss);
    if (kind == "trained") return shared_qe_factory(std::shared_ptr<const QeScorer>(std::shared_ptr<const QeScorer>(), trained));
    return nullptr;
  }
};

QualityMetric read_metric(Options& o, const char* key) {
  const std::string m = o.text(key, "token_f1");
  if (m == "token_f1") return QualityMetric::kTokenF1;
  if (m == "chrf") return QualityMetric::kChrf;
  bad_option(std::string(key) + " must be token_f1 or chrf");
}

struct Synthetic {
  std::uint64_t seed = 1;
  SplitMassOptions corpus;
};

std::optional<Synthetic> read_synthetic(Options& o, SplitMassOptions defaults) {
  const Json raw = o.value("synthetic");
  if (raw.is_null()) return std::nullopt;
  Options s(raw);
  Synthetic out;
  out.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
  out.corpus = defaults;
  out.corpus.sentences = static_cast<int>(s.integer("sentences", defaults.sentences));
  out.corpus.min_len = static_cast<int>(s.integer("min_len", defaults.min_len));
  out.corpus.max_len = static_cast<int>(s.integer("max_len", defaults.max_len));
  s.finish();
  return out;
}

// Corpus for sweep/compare: either the input file or a synthetic corpus.
struct EvalCorpus {
  std::optional<ConstructedCorpus> synthetic;
  const TranslationScorer* lm = nullptr;
  std::vector<InputLine> lines;
};

EvalCorpus load_eval_corpus(const TranslationScorer* lm, const std::optional<std::string>& path,
                            const std::optional<Synthetic>& synthetic) {
  EvalCorpus c;
  if (synthetic) {
    if (path) bad_option("give either an input file or synthetic, not both");
    c.synthetic = split_mass_corpus(synthetic->seed, synthetic->corpus);
    c.lm = c.synthetic->nmt.get();
    for (const auto& seg : c.synthetic->segments) {
      InputLine line;
      line.source_text = c.synthetic->vocab->decode(seg.source);
      line.reference_text = c.synthetic->vocab->decode(seg.reference);
      line.segment = seg;
      c.lines.push_back(std::move(line));
    }
    return c;
  }
  if (!path) bad_option("an input file is required");
  if (lm == nullptr) bad_option("a translation model is required");
  c.lm = lm;
  c.lines = read_inputs(lm->vocab(), *path);
  if (c.lines.empty()) fail(ErrorKind::kData, "'" + *path + "' has no segments");
  for (const auto& l : c.lines) {
    if (!l.reference_text) {
      fail(ErrorKind::kData, "segment " + l.segment.id + " has no reference");
    }
  }
  return c;
}

std::vector<double> read_grid(Options& o) {
  const Json raw = o.value("alpha_grid");
  if (raw.is_null()) return default_alpha_grid();
  if (!raw.is_array() || raw.empty()) bad_option("alpha_grid must be a non-empty array");
  std::vector<double> grid;
  for (const auto& a : raw) {
    if (!a.is_number()) bad_option("alpha_grid entries must be numbers");
    grid.push_back(a.get<double>());
  }
  return grid;
}

}  // namespace

Options::Options(const Json& options) : options_(options.is_null() ? Json::object() : options) {
  if (!options_.is_object()) bad_option("options must be a JSON object");
}

Json Options::value(const char* key) {
  auto it = options_.find(key);
  if (it == options_.end()) return nullptr;
  resolved_[key] = *it;
  return *it;
}

double Options::real(const char* key, double fallback) {
  const Json v = value(key);
  if (v.is_null()) {
    resolved_[key] = fallback;
    return fallback;
  }
  if (!v.is_number()) bad_option(std::string(key) + " must be a number");
  return v.get<double>();
}

long long Options::integer(const char* key, long long fallback) {
  const Json v = value(key);
  if (v.is_null()) {
    resolved_[key] = fallback;
    return fallback;
  }
  if (!v.is_number_integer()) bad_option(std::string(key) + " must be an integer");
  return v.get<long long>();
}

bool Options::boolean(const char* key, bool fallback) {
  const Json v = value(key);
  if (v.is_null()) {
    resolved_[key] = fallback;
    return fallback;
  }
  if (!v.is_boolean()) bad_option(std::string(key) + " must be true or false");
  return v.get<bool>();
}

std::string Options::text(const char* key, const std::string& fallback) {
  const Json v = value(key);
  if (v.is_null()) {
    resolved_[key] = fallback;
    return fallback;
  }
  if (!v.is_string()) bad_option(std::string(key) + " must be a string");
  return v.get<std::string>();
}

void Options::finish() const {
  for (const auto& [key, v] : options_.items()) {
    if (!resolved_.contains(key)) bad_option("unknown option '" + key + "'");
  }
}

Json train_lm(const std::string& corpus_path, const Json& options,
              std::unique_ptr<NgramTranslationScorer>* model) {
  Options o(options);
  NgramOptions opts;
  opts.order = static_cast<int>(o.integer("order", opts.order));
  opts.add_k = o.real("add_k", opts.add_k);
  opts.channel_weight = o.real("channel_weight", opts.channel_weight);
  o.finish();
  const auto corpus = read_parallel_corpus_file(corpus_path);
  if (corpus.empty()) fail(ErrorKind::kData, "'" + corpus_path + "' has no sentence pairs");
  for (const auto& p : corpus) {
    if (!p.has_target) fail(ErrorKind::kData, "training pair without a target: " + p.source);
  }
  auto lm = std::make_unique<NgramTranslationScorer>(NgramTranslationScorer::train(corpus, opts));
  Json summary;
  summary["sentences"] = corpus.size();
  summary["vocab_size"] = lm->vocab().size();
  summary["config"] = o.resolved();
  *model = std::move(lm);
  return summary;
}

Json annotate(const std::string& mqm_path, const std::string& out_path, const Json& options) {
  Options o(options);
  TokenizerOptions tok;
  const std::string kind = o.text("tokenizer", "chunk");
  if (kind == "chunk") {
    tok.kind = TokenizerOptions::Kind::kChunk;
  } else if (kind == "whitespace") {
    tok.kind = TokenizerOptions::Kind::kWhitespace;
  } else {
    bad_option("tokenizer must be chunk or whitespace");
  }
  const long long chunk = o.integer("chunk_chars", static_cast<long long>(tok.chunk_chars));
  if (chunk < 1) bad_option("chunk_chars must be >= 1");
  tok.chunk_chars = static_cast<std::size_t>(chunk);
  o.finish();

  auto in = open_input(mqm_path);
  AnnotateStats stats;
  const auto examples = annotate_stream(in, tok, &stats);
  const std::string header = header_line("annotate", o.resolved(), Json::object()).dump();
  std::ofstream out(out_path);
  if (!out) fail(ErrorKind::kIo, "cannot write '" + out_path + "'");
  write_labeled(out, examples, &header);

  Json j;
  j["rows"] = stats.rows;
  j["records"] = stats.records;
  j["skipped_source_spans"] = stats.skipped_source_spans;
  j["labels"] = {{"GOOD", stats.good}, {"BAD", stats.bad}, {"MASK", stats.mask}};
  j["config"] = o.resolved();
  return j;
}

Json train_qe(const std::string& labeled_path, const std::optional<std::string>& valid_path,
              VocabPtr vocab, const Json& options, std::unique_ptr<TokenQeClassifier>* model) {
  Options o(options);
  TrainOptions t;
  t.weights.good = o.real("weight_good", t.weights.good);
  t.weights.bad = o.real("weight_bad", t.weights.bad);
  t.epochs = static_cast<int>(o.integer("epochs", t.epochs));
  t.learning_rate = o.real("learning_rate", t.learning_rate);
  t.l2 = o.real("l2", t.l2);
  t.batch_size = static_cast<int>(o.integer("batch_size", t.batch_size));
  t.seed = static_cast<std::uint64_t>(o.integer("seed", static_cast<long long>(t.seed)));
  t.patience = static_cast<int>(o.integer("patience", t.patience));
  o.finish();

  const auto data = read_labeled_file(labeled_path);
  if (data.empty()) fail(ErrorKind::kData, "'" + labeled_path + "' has no labeled examples");
  std::vector<LabeledExample> valid;
  if (valid_path) valid = read_labeled_file(*valid_path);
  if (!vocab) vocab = vocabulary_from_examples(data);
  TrainReport report;
  auto qe = std::make_unique<TokenQeClassifier>(train_token_qe(vocab, data, valid, t, &report));

  Json j;
  j["examples"] = data.size();
  j["validation_examples"] = valid.size();
  j["vocab_size"] = vocab->size();
  j["epochs_run"] = report.epochs_run;
  j["best_epoch"] = report.best_epoch;
  j["train_macro_f1"] = report.train_macro_f1;
  j["valid_macro_f1"] = report.valid_macro_f1 ? Json(*report.valid_macro_f1) : Json(nullptr);
  j["labels"] = {{"GOOD", report.good_tokens}, {"BAD", report.bad_tokens},
                 {"MASK", report.masked_tokens}};
  j["warnings"] = report.warnings;
  j["config"] = o.resolved();
  *model = std::move(qe);
  return j;
}

std::string decode(const TranslationScorer& lm, const QeScorer* qe, const std::string& input_path,
                   const Json& options) {
  Options o(options);
  const std::string search = o.text("search", "qa");
  if (search != "beam" && search != "qa" && search != "exhaustive") {
    bad_option("search must be beam, qa or exhaustive");
  }
  DecodeConfig config = read_decode_config(o);
  const QeChoice choice = QeChoice::read(o, qe, "none");
  const long long budget = o.integer("budget", static_cast<long long>(kDefaultExhaustiveBudget));
  o.finish();
  if (search != "beam" && choice.kind == "none" && config.alpha != 1.0) {
    bad_option("alpha < 1 needs a QE scorer (qe=oracle or a trained model)");
  }
  if (search == "beam") config.alpha = 1.0;

  const Vocabulary& vocab = lm.vocab();
  const auto lines = read_inputs(vocab, input_path);
  const auto factory = search == "beam" ? QeFactory() : choice.factory(vocab, qe);

  std::ostringstream out;
  out << header_line("decode", o.resolved(), Json::object()).dump() << '\n';
  for (const auto& line : lines) {
    std::shared_ptr<const QeScorer> scorer = factory ? factory(line.segment) : nullptr;
    CostCounters counters;
    ScoredNBest nbest;
    if (search == "beam") {
      nbest = beam_search(lm, line.segment.source, config, &counters);
    } else if (search == "qa") {
      nbest = qa_beam_search(lm, scorer.get(), line.segment.source, config, &counters);
    } else {
      nbest = exhaustive_decode(lm, scorer.get(), line.segment.source, config,
                                static_cast<std::uint64_t>(budget), &counters);
    }
    Json rec = segment_head(line);
    rec["candidates"] = nbest_json(vocab, nbest);
    rec["unfinished_fallback"] = nbest.unfinished_fallback;
    rec["config"] = config_json(config);
    rec["counters"] = counters_json(counters);
    out << rec.dump() << '\n';
  }
  return out.str();
}

std::string rerank(const TranslationScorer& lm, const QeScorer* qe, const std::string& nbest_path,
                   const Json& options) {
  Options o(options);
  const DecodeConfig config = read_decode_config(o);
  const QeChoice choice = QeChoice::read(o, qe, "oracle");
  o.finish();
  if (choice.kind == "none") bad_option("rerank needs a QE scorer (qe=oracle or a trained model)");
  const Vocabulary& vocab = lm.vocab();
  const auto factory = choice.factory(vocab, qe);

  auto in = open_input(nbest_path);
  std::ostringstream out;
  out << header_line("rerank", o.resolved(), Json::object()).dump() << '\n';
  std::string text;
  std::size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    if (split_whitespace(text).empty()) continue;
    auto where = [&] { return nbest_path + ":" + std::to_string(lineno) + ": "; };
    Json rec;
    try {
      rec = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kData, where() + "invalid JSON: " + e.what());
    }
    if (rec.contains("qad_header")) continue;
    try {
      InputLine line;
      line.source_text = rec.at("source").get<std::string>();
      line.segment.id = rec.contains("id") ? rec["id"].get<std::string>() : std::to_string(lineno);
      line.segment.source = vocab.encode(line.source_text);
      if (rec.contains("reference")) {
        line.reference_text = rec["reference"].get<std::string>();
        line.segment.reference = vocab.encode(*line.reference_text);
      }
      std::vector<Hypothesis> hyps;
      for (const auto& c : rec.at("candidates")) {
        Hypothesis h;
        for (const auto& t : c.at("tokens")) {
          const auto s = t.get<std::string>();
          if (!vocab.contains(s)) fail(ErrorKind::kData, where() + "token '" + s + "' not in vocabulary");
          h.tokens.push_back(vocab.id(s));
        }
        h.nmt_logprobs = c.at("nmt_logprobs").get<std::vector<double>>();
        if (h.tokens.empty() || h.nmt_logprobs.size() != h.tokens.size()) {
          fail(ErrorKind::kData, where() + "candidate tokens and nmt_logprobs differ in length");
        }
        h.finished = h.tokens.back() == kEos;
        hyps.push_back(std::move(h));
      }
      if (hyps.empty()) fail(ErrorKind::kData, where() + "record has no candidates");
      CostCounters counters;
      const auto scorer = factory(line.segment);
      const auto ranked = rerank_nbest(std::move(hyps), *scorer, line.segment.source, config, &counters);
      Json outrec = segment_head(line);
      outrec["candidates"] = nbest_json(vocab, ranked);
      outrec["unfinished_fallback"] = rec.value("unfinished_fallback", false);
      outrec["config"] = config_json(config);
      outrec["counters"] = counters_json(counters);
      out << outrec.dump() << '\n';
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kData, where() + "bad N-best record: " + e.what());
    }
  }
  return out.str();
}

std::string mbr(const TranslationScorer& lm, const std::string& input_path, const Json& options) {
  Options o(options);
  SamplingOptions s;
  s.epsilon = o.real("epsilon", s.epsilon);
  s.count = static_cast<int>(o.integer("count", s.count));
  s.seed = static_cast<std::uint64_t>(o.integer("seed", static_cast<long long>(s.seed)));
  s.max_len = static_cast<int>(o.integer("max_len", s.max_len));
  s.logprob_floor = o.real("logprob_floor", s.logprob_floor);
  const QualityMetric utility = read_metric(o, "utility");
  o.finish();
  if (s.count < 1) bad_option("count must be >= 1");

  const Vocabulary& vocab = lm.vocab();
  const auto lines = read_inputs(vocab, input_path);
  DecodeConfig scoring;
  scoring.alpha = 1.0;
  scoring.logprob_floor = s.logprob_floor;

  std::ostringstream out;
  out << header_line("mbr", o.resolved(), {{"sampling", s.seed}}).dump() << '\n';
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    SamplingOptions so = s;
    so.seed = s.seed + i;
    CostCounters counters;
    const auto samples = epsilon_sample(lm, line.segment.source, so, &counters);
    const std::size_t pick = mbr_select(samples, [&](const Hypothesis& a, const Hypothesis& b) {
      return quality_proxy(vocab.decode(a.tokens), vocab.decode(b.tokens), utility);
    });
    Json rec = segment_head(line);
    Json all = Json::array();
    for (const auto& h : samples) all.push_back(candidate_json(vocab, score_entry(h, scoring)));
    rec["candidates"] = Json::array({all[pick]});
    rec["selected_index"] = pick;
    rec["samples"] = std::move(all);
    rec["config"] = {{"epsilon", s.epsilon}, {"count", s.count}, {"seed", so.seed},
                     {"max_len", s.max_len}};
    rec["counters"] = counters_json(counters);
    out << rec.dump() << '\n';
  }
  return out.str();
}

Json sweep(const TranslationScorer* lm, const QeScorer* qe,
           const std::optional<std::string>& input_path, const Json& options) {
  Options o(options);
  DecodeConfig config = read_decode_config(o, false);
  config.num_beams = static_cast<int>(o.integer("nbest", 25));
  config.validate();
  const std::vector<double> grid = read_grid(o);
  const QualityMetric metric = read_metric(o, "metric");
  const QeChoice choice = QeChoice::read(o, qe, "oracle");
  SplitMassOptions short_sentences;
  short_sentences.sentences = 20;
  short_sentences.min_len = 2;
  short_sentences.max_len = 3;
  const auto synthetic = read_synthetic(o, short_sentences);
  o.finish();
  if (choice.kind == "none") bad_option("sweep needs a QE scorer (qe=oracle or a trained model)");
  if (synthetic && choice.kind != "oracle") bad_option("synthetic corpora use qe=oracle");

  const EvalCorpus corpus = load_eval_corpus(lm, input_path, synthetic);
  const Vocabulary& vocab = corpus.lm->vocab();
  std::vector<NBestSegment> segments;
  CostCounters counters;
  for (const auto& line : corpus.lines) {
    const auto nbest = beam_search(*corpus.lm, line.segment.source, config, &counters);
    NBestSegment s{line.segment, {}};
    for (const auto& e : nbest.entries) s.candidates.push_back(e.hyp);
    segments.push_back(std::move(s));
  }
  const auto curve = alpha_sweep(segments, choice.factory(vocab, qe), grid,
                                 reference_quality(VocabPtr(VocabPtr(), &vocab), metric), config);
  Json j;
  Json points = Json::array();
  for (const auto& p : curve) points.push_back({{"alpha", p.alpha}, {"mean_quality", p.mean_quality}});
  j["curve"] = std::move(points);
  j["segments"] = segments.size();
  j["counters"] = counters_json(counters);
  j["seeds"] = synthetic ? Json{{"synthetic", synthetic->seed}} : Json::object();
  j["config"] = o.resolved();
  return j;
}

Json compare(const TranslationScorer* lm, const QeScorer* qe,
             const std::optional<std::string>& input_path, const Json& options) {
  Options o(options);
  CompareOptions c;
  c.config = read_decode_config(o);
  const Json strategies = o.value("strategies");
  if (!strategies.is_null()) {
    if (!strategies.is_array() || strategies.empty()) bad_option("strategies must be a non-empty array");
    c.strategies.clear();
    for (const auto& s : strategies) {
      const auto parsed = s.is_string() ? parse_strategy(s.get<std::string>()) : std::nullopt;
      if (!parsed) bad_option("unknown strategy " + s.dump());
      c.strategies.push_back(*parsed);
    }
  }
  c.rerank_beams = static_cast<int>(o.integer("rerank_beams", c.rerank_beams));
  c.sampling.epsilon = o.real("epsilon", c.sampling.epsilon);
  c.sampling.count = static_cast<int>(o.integer("samples", c.sampling.count));
  c.sampling.seed = static_cast<std::uint64_t>(o.integer("seed", static_cast<long long>(c.sampling.seed)));
  c.doc_k = static_cast<int>(o.integer("doc_k", c.doc_k));
  c.bootstrap_resamples = static_cast<int>(o.integer("bootstrap_resamples", c.bootstrap_resamples));
  c.bootstrap_seed = static_cast<std::uint64_t>(
      o.integer("bootstrap_seed", static_cast<long long>(c.sampling.seed)));
  c.metric = read_metric(o, "metric");
  const Json excluded = o.value("exclude");
  if (!excluded.is_null()) {
    if (!excluded.is_array()) bad_option("exclude must be an array of segment ids");
    for (const auto& id : excluded) {
      if (!id.is_string()) bad_option("exclude must be an array of segment ids");
      c.excluded_segments.insert(id.get<std::string>());
    }
  }
  const QeChoice choice = QeChoice::read(o, qe, "oracle");
  const auto synthetic = read_synthetic(o, SplitMassOptions{});
  o.finish();
  if (c.doc_k < 1) bad_option("doc_k must be >= 1");
  if (c.sampling.count < 1) bad_option("samples must be >= 1");
  if (c.bootstrap_resamples < 1) bad_option("bootstrap_resamples must be >= 1");
  if (synthetic && choice.kind != "oracle") bad_option("synthetic corpora use qe=oracle");
  const bool needs_qe = c.config.alpha != 1.0 ||
                        std::any_of(c.strategies.begin(), c.strategies.end(), [](Strategy s) {
                          return s == Strategy::kBeamRerank || s == Strategy::kQaRerank;
                        });
  if (choice.kind == "none" && needs_qe) bad_option("these strategies need a QE scorer");

  const EvalCorpus corpus = load_eval_corpus(lm, input_path, synthetic);
  const Vocabulary& vocab = corpus.lm->vocab();
  std::vector<Segment> segments;
  for (const auto& l : corpus.lines) segments.push_back(l.segment);
  const CompareReport report = compare_strategies(*corpus.lm, choice.factory(vocab, qe), segments, c);

  Json j;
  Json names = Json::array();
  Json strat = Json::array();
  Json counters = Json::object();
  for (const auto& r : report.results) {
    const std::string name(strategy_name(r.strategy));
    names.push_back(name);
    strat.push_back({{"name", name}, {"mean_quality", r.mean_quality}});
    counters[name] = counters_json(r.counters);
  }
  j["strategies"] = std::move(strat);
  Json per = Json::array();
  for (std::size_t i = 0; i < report.segments.size(); ++i) {
    const auto& seg = report.segments[i];
    Json s;
    s["id"] = seg.id;
    s["source"] = vocab.decode(seg.source);
    s["reference"] = vocab.decode(seg.reference);
    Json outs = Json::object();
    for (const auto& r : report.results) {
      outs[std::string(strategy_name(r.strategy))] = {{"text", vocab.decode(r.outputs[i].tokens)},
                                                      {"quality", r.quality[i]}};
    }
    s["outputs"] = std::move(outs);
    per.push_back(std::move(s));
  }
  j["per_segment"] = std::move(per);
  Json matrix = Json::array();
  for (const auto& row : report.pairwise_p) {
    Json r = Json::array();
    for (const auto& p : row) r.push_back(p ? Json(*p) : Json(nullptr));
    matrix.push_back(std::move(r));
  }
  j["pairwise_p"] = {{"order", names}, {"matrix", std::move(matrix)}};
  const auto& corr = report.correlation;
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  j["correlation"] = {{"pairs", corr.pairs},
                      {"pearson", opt(corr.pearson)},
                      {"spearman", opt(corr.spearman)},
                      {"kendall", opt(corr.kendall)}};
  j["counters"] = std::move(counters);
  Json seeds = {{"sampling", c.sampling.seed}, {"bootstrap", c.bootstrap_seed}};
  if (synthetic) seeds["synthetic"] = synthetic->seed;
  j["seeds"] = std::move(seeds);
  Json config = o.resolved();
  if (!config.contains("strategies")) config["strategies"] = names;
  j["config"] = std::move(config);
  return j;
}

}  // namespace qad::pipeline
