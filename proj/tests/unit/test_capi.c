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

/* Exercises the shared library through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qad/qad.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static char data_dir[1024];

static const char* data(const char* name) {
  static char buf[2048];
  snprintf(buf, sizeof buf, "%s/%s", data_dir, name);
  return buf;
}

static int count_lines(const char* s) {
  int n = 0;
  for (; *s; ++s) n += *s == '\n';
  return n;
}

int main(int argc, char** argv) {
  qad_lm* lm = NULL;
  qad_lm* loaded = NULL;
  qad_qe* qe = NULL;
  char* summary = NULL;
  char* out = NULL;
  char* again = NULL;
  char model_path[] = "capi_test_lm.qad";
  char labeled_path[] = "capi_test_labeled.jsonl";
  char qe_path[] = "capi_test_qe.qad";

  snprintf(data_dir, sizeof data_dir, "%s", argc > 1 ? argv[1] : "tests/data");

  EXPECT(strlen(qad_version()) > 0);
  EXPECT(strcmp(qad_status_name(QAD_ERR_DATA), "data error") == 0);

  /* Training and persistence. */
  EXPECT(qad_lm_train(data("toy_corpus.tsv"), "{\"order\": 2}", &lm, &summary) == QAD_OK);
  EXPECT(lm != NULL);
  EXPECT(summary != NULL && strstr(summary, "\"sentences\":12") != NULL);
  qad_string_free(summary);
  EXPECT(qad_lm_vocab_size(lm) > 3);
  EXPECT(qad_lm_vocab_size(NULL) == 0);
  EXPECT(qad_lm_save(lm, model_path) == QAD_OK);
  EXPECT(qad_lm_load(model_path, &loaded) == QAD_OK);
  EXPECT(qad_lm_vocab_size(loaded) == qad_lm_vocab_size(lm));

  /* Error reporting. */
  EXPECT(qad_lm_train(data("toy_corpus.tsv"), "{\"order\": ", &lm, NULL) == QAD_ERR_INVALID_ARGUMENT);
  EXPECT(strstr(qad_last_error(), "JSON") != NULL);
  EXPECT(qad_lm_train(data("toy_corpus.tsv"), "{\"smoothing\": 1}", &lm, NULL) ==
         QAD_ERR_INVALID_ARGUMENT);
  EXPECT(strstr(qad_last_error(), "smoothing") != NULL);
  EXPECT(qad_lm_train(data("no_such_file.tsv"), NULL, &lm, NULL) == QAD_ERR_IO);
  EXPECT(qad_lm_train(NULL, NULL, &lm, NULL) == QAD_ERR_INVALID_ARGUMENT);
  EXPECT(qad_lm_load(data("toy_corpus.tsv"), &lm) == QAD_ERR_DATA);
  EXPECT(qad_decode(NULL, NULL, data("toy_input.tsv"), NULL, &out) == QAD_ERR_INVALID_ARGUMENT);
  EXPECT(qad_decode(lm, NULL, data("toy_input.tsv"), "{\"alpha\": 0.5}", &out) ==
         QAD_ERR_INVALID_ARGUMENT);
  EXPECT(qad_decode(lm, NULL, data("toy_input.tsv"), "{\"search\": \"exhaustive\", \"alpha\": 1, \"max_len\": 12}",
                    &out) == QAD_ERR_BUDGET);

  /* Decoding with the original and reloaded model agrees, counters aside. */
  EXPECT(qad_decode(lm, NULL, data("toy_input.tsv"), "{\"search\": \"beam\", \"max_len\": 10}", &out) ==
         QAD_OK);
  EXPECT(qad_decode(loaded, NULL, data("toy_input.tsv"), "{\"search\": \"beam\", \"max_len\": 10}",
                    &again) == QAD_OK);
  EXPECT(out != NULL && count_lines(out) == 5);
  EXPECT(again != NULL && count_lines(again) == 5);
  if (out != NULL && again != NULL) {
    const char* a = strstr(out, "\"candidates\"");
    const char* b = strstr(again, "\"candidates\"");
    EXPECT(a != NULL && b != NULL && strncmp(a, b, 200) == 0);
  }
  qad_string_free(out);
  qad_string_free(again);
  out = NULL;

  /* Annotation and QE training on the model vocabulary. */
  EXPECT(qad_annotate(data("toy_mqm.tsv"), labeled_path, "{\"tokenizer\": \"whitespace\"}", &summary) ==
         QAD_OK);
  EXPECT(summary != NULL && strstr(summary, "\"BAD\":4") != NULL);
  qad_string_free(summary);
  EXPECT(qad_qe_train(labeled_path, NULL, lm, "{\"epochs\": 30}", &qe, NULL) == QAD_OK);
  EXPECT(qe != NULL);
  EXPECT(qad_qe_save(qe, qe_path) == QAD_OK);
  qad_qe_free(qe);
  qe = NULL;
  EXPECT(qad_qe_load(qe_path, &qe) == QAD_OK);
  EXPECT(qad_decode(lm, qe, data("toy_input.tsv"), "{\"alpha\": 0.5, \"max_len\": 10}", &out) == QAD_OK);
  EXPECT(out != NULL && strstr(out, "\"qe\":\"trained\"") != NULL);
  qad_string_free(out);
  out = NULL;

  /* Synthetic evaluation needs no model. */
  EXPECT(qad_sweep(NULL, NULL, NULL, "{\"synthetic\": {\"seed\": 1}}", &out) == QAD_OK);
  EXPECT(out != NULL && strstr(out, "\"curve\"") != NULL);
  qad_string_free(out);
  out = NULL;
  EXPECT(qad_compare(NULL, NULL, NULL,
                     "{\"strategies\": [\"beam\", \"qa\"], \"synthetic\": {\"seed\": 1}, \"max_len\": 24}",
                     &out) == QAD_OK);
  EXPECT(out != NULL && strstr(out, "\"pairwise_p\"") != NULL);
  qad_string_free(out);

  qad_qe_free(qe);
  qad_lm_free(loaded);
  qad_lm_free(lm);
  qad_lm_free(NULL);
  remove(model_path);
  remove(labeled_path);
  remove(qe_path);

  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
