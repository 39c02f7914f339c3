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

#include "qad/qad.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "core/error.hpp"
#include "pipeline/pipeline.hpp"

struct qad_lm {
  std::unique_ptr<qad::NgramTranslationScorer> model;
};

struct qad_qe {
  std::unique_ptr<qad::TokenQeClassifier> model;
};

namespace {

using qad::pipeline::Json;

thread_local std::string last_error;

qad_status status_for(qad::ErrorKind kind) {
  switch (kind) {
    case qad::ErrorKind::kInvalidArgument: return QAD_ERR_INVALID_ARGUMENT;
    case qad::ErrorKind::kData: return QAD_ERR_DATA;
    case qad::ErrorKind::kIo: return QAD_ERR_IO;
    case qad::ErrorKind::kBudget: return QAD_ERR_BUDGET;
    case qad::ErrorKind::kEmpty: return QAD_ERR_EMPTY;
  }
  return QAD_ERR_INTERNAL;
}

template <typename F>
qad_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return QAD_OK;
  } catch (const qad::Error& e) {
    last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return QAD_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (p == nullptr) qad::fail(qad::ErrorKind::kInvalidArgument, std::string(what) + " is NULL");
}

Json parse_options(const char* options_json) {
  if (options_json == nullptr || *options_json == '\0') return Json::object();
  try {
    return Json::parse(options_json);
  } catch (const nlohmann::json::exception& e) {
    qad::fail(qad::ErrorKind::kInvalidArgument, std::string("options are not valid JSON: ") + e.what());
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<std::string> optional_path(const char* p) {
  if (p == nullptr) return std::nullopt;
  return std::string(p);
}

template <typename Model>
void save_model(const Model& m, const char* path) {
  need(path, "path");
  std::ofstream out(path);
  if (!out) qad::fail(qad::ErrorKind::kIo, std::string("cannot write '") + path + "'");
  m.save(out);
  out.flush();
  if (!out) qad::fail(qad::ErrorKind::kIo, std::string("failed writing '") + path + "'");
}

std::ifstream open_model(const char* path) {
  need(path, "path");
  std::ifstream in(path);
  if (!in) qad::fail(qad::ErrorKind::kIo, std::string("cannot open '") + path + "'");
  return in;
}

}  // namespace

extern "C" {

const char* qad_version(void) { return "0.1.0"; }

const char* qad_last_error(void) { return last_error.c_str(); }

const char* qad_status_name(qad_status status) {
  switch (status) {
    case QAD_OK: return "ok";
    case QAD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QAD_ERR_DATA: return "data error";
    case QAD_ERR_IO: return "i/o error";
    case QAD_ERR_BUDGET: return "budget exceeded";
    case QAD_ERR_EMPTY: return "empty input";
    case QAD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qad_string_free(char* s) { std::free(s); }

qad_status qad_lm_train(const char* corpus_path, const char* options_json, qad_lm** out,
                        char** summary_json) {
  return guarded([&] {
    need(corpus_path, "corpus_path");
    need(out, "out");
    auto lm = std::make_unique<qad_lm>();
    const Json summary = qad::pipeline::train_lm(corpus_path, parse_options(options_json), &lm->model);
    if (summary_json != nullptr) *summary_json = copy_out(summary.dump());
    *out = lm.release();
  });
}

qad_status qad_lm_load(const char* path, qad_lm** out) {
  return guarded([&] {
    need(out, "out");
    auto in = open_model(path);
    auto lm = std::make_unique<qad_lm>();
    lm->model = std::make_unique<qad::NgramTranslationScorer>(qad::NgramTranslationScorer::load(in));
    *out = lm.release();
  });
}

qad_status qad_lm_save(const qad_lm* lm, const char* path) {
  return guarded([&] {
    need(lm, "lm");
    save_model(*lm->model, path);
  });
}

size_t qad_lm_vocab_size(const qad_lm* lm) { return lm == nullptr ? 0 : lm->model->vocab().size(); }

void qad_lm_free(qad_lm* lm) { delete lm; }

qad_status qad_qe_train(const char* labeled_path, const char* valid_path, const qad_lm* vocab_from,
                        const char* options_json, qad_qe** out, char** report_json) {
  return guarded([&] {
    need(labeled_path, "labeled_path");
    need(out, "out");
    auto qe = std::make_unique<qad_qe>();
    qad::VocabPtr vocab = vocab_from != nullptr ? vocab_from->model->vocab_ptr() : nullptr;
    const Json report = qad::pipeline::train_qe(labeled_path, optional_path(valid_path), vocab,
                                                parse_options(options_json), &qe->model);
    if (report_json != nullptr) *report_json = copy_out(report.dump());
    *out = qe.release();
  });
}

qad_status qad_qe_load(const char* path, qad_qe** out) {
  return guarded([&] {
    need(out, "out");
    auto in = open_model(path);
    auto qe = std::make_unique<qad_qe>();
    qe->model = std::make_unique<qad::TokenQeClassifier>(qad::TokenQeClassifier::load(in));
    *out = qe.release();
  });
}

qad_status qad_qe_save(const qad_qe* qe, const char* path) {
  return guarded([&] {
    need(qe, "qe");
    save_model(*qe->model, path);
  });
}

void qad_qe_free(qad_qe* qe) { delete qe; }

qad_status qad_annotate(const char* mqm_path, const char* out_path, const char* options_json,
                        char** stats_json) {
  return guarded([&] {
    need(mqm_path, "mqm_path");
    need(out_path, "out_path");
    const Json stats = qad::pipeline::annotate(mqm_path, out_path, parse_options(options_json));
    if (stats_json != nullptr) *stats_json = copy_out(stats.dump());
  });
}

qad_status qad_decode(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                      const char* options_json, char** out_jsonl) {
  return guarded([&] {
    need(lm, "lm");
    need(input_path, "input_path");
    need(out_jsonl, "out_jsonl");
    *out_jsonl = copy_out(qad::pipeline::decode(*lm->model, qe != nullptr ? qe->model.get() : nullptr,
                                                input_path, parse_options(options_json)));
  });
}

qad_status qad_rerank(const qad_lm* lm, const qad_qe* qe, const char* nbest_path,
                      const char* options_json, char** out_jsonl) {
  return guarded([&] {
    need(lm, "lm");
    need(nbest_path, "nbest_path");
    need(out_jsonl, "out_jsonl");
    *out_jsonl = copy_out(qad::pipeline::rerank(*lm->model, qe != nullptr ? qe->model.get() : nullptr,
                                                nbest_path, parse_options(options_json)));
  });
}

qad_status qad_mbr(const qad_lm* lm, const char* input_path, const char* options_json,
                   char** out_jsonl) {
  return guarded([&] {
    need(lm, "lm");
    need(input_path, "input_path");
    need(out_jsonl, "out_jsonl");
    *out_jsonl = copy_out(qad::pipeline::mbr(*lm->model, input_path, parse_options(options_json)));
  });
}

qad_status qad_sweep(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                     const char* options_json, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const Json report = qad::pipeline::sweep(lm != nullptr ? lm->model.get() : nullptr,
                                             qe != nullptr ? qe->model.get() : nullptr,
                                             optional_path(input_path), parse_options(options_json));
    *out_json = copy_out(report.dump(2));
  });
}

qad_status qad_compare(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                       const char* options_json, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const Json report = qad::pipeline::compare(lm != nullptr ? lm->model.get() : nullptr,
                                               qe != nullptr ? qe->model.get() : nullptr,
                                               optional_path(input_path), parse_options(options_json));
    *out_json = copy_out(report.dump(2));
  });
}

}  // extern "C"
