/* Copyright 2026 The QAD Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QAD_QAD_H_
#define QAD_QAD_H_

/* C interface to the quality-aware decoding library.
 *
 * Every function returns a qad_status. On failure a description is
 * available from qad_last_error() on the same thread until the next call.
 * Strings returned through `char**` are owned by the caller and released
 * with qad_string_free(). Options are JSON objects given as UTF-8 text;
 * NULL means "all defaults". Unknown option keys are rejected.
 */

#include <stddef.h>

#if defined(_WIN32)
#define QAD_API __declspec(dllexport)
#else
#define QAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qad_status {
  QAD_OK = 0,
  QAD_ERR_INVALID_ARGUMENT = 1, /* bad option value or API misuse */
  QAD_ERR_DATA = 2,             /* malformed input file contents */
  QAD_ERR_IO = 3,               /* file cannot be opened or written */
  QAD_ERR_BUDGET = 4,           /* exhaustive search space too large */
  QAD_ERR_EMPTY = 5,            /* scoring an empty hypothesis */
  QAD_ERR_INTERNAL = 6
} qad_status;

/* Translation model (n-gram). */
typedef struct qad_lm qad_lm;
/* Trained token-level QE classifier. */
typedef struct qad_qe qad_qe;

QAD_API const char* qad_version(void);
QAD_API const char* qad_last_error(void);
QAD_API const char* qad_status_name(qad_status status);
QAD_API void qad_string_free(char* s);

/* options: order, add_k, channel_weight. summary_json may be NULL. */
QAD_API qad_status qad_lm_train(const char* corpus_path, const char* options_json, qad_lm** out,
                                char** summary_json);
QAD_API qad_status qad_lm_load(const char* path, qad_lm** out);
QAD_API qad_status qad_lm_save(const qad_lm* lm, const char* path);
QAD_API size_t qad_lm_vocab_size(const qad_lm* lm);
QAD_API void qad_lm_free(qad_lm* lm);

/* options: weight_good, weight_bad, epochs, learning_rate, l2, batch_size,
 * seed, patience. valid_path and vocab_from may be NULL; with vocab_from
 * the classifier shares that model's vocabulary. */
QAD_API qad_status qad_qe_train(const char* labeled_path, const char* valid_path,
                                const qad_lm* vocab_from, const char* options_json,
                                qad_qe** out, char** report_json);
QAD_API qad_status qad_qe_load(const char* path, qad_qe** out);
QAD_API qad_status qad_qe_save(const qad_qe* qe, const char* path);
QAD_API void qad_qe_free(qad_qe* qe);

/* MQM TSV to JSON-lines token labels. options: tokenizer, chunk_chars. */
QAD_API qad_status qad_annotate(const char* mqm_path, const char* out_path,
                                const char* options_json, char** stats_json);

/* JSON-lines N-best output. options: search, qe, alpha, num_beams, topk,
 * max_len, logprob_floor, include_eos_in_qe, p_match, p_miss, budget. */
QAD_API qad_status qad_decode(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                              const char* options_json, char** out_jsonl);
QAD_API qad_status qad_rerank(const qad_lm* lm, const qad_qe* qe, const char* nbest_path,
                              const char* options_json, char** out_jsonl);
/* options: epsilon, count, seed, max_len, logprob_floor, utility. */
QAD_API qad_status qad_mbr(const qad_lm* lm, const char* input_path, const char* options_json,
                           char** out_jsonl);

/* With options.synthetic set, lm and input_path must be NULL and a
 * constructed corpus with the reference oracle QE is used. */
QAD_API qad_status qad_sweep(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                             const char* options_json, char** out_json);
QAD_API qad_status qad_compare(const qad_lm* lm, const qad_qe* qe, const char* input_path,
                               const char* options_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* QAD_QAD_H_ */
