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

// qad: command-line front end over the C API.
//
// Exit codes: 0 success, 1 usage error, 2 data or I/O error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qad/qad.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

constexpr const char* kConfigHelp =
    "Flat key=value file; keys are long flag names without the leading dashes\n"
    "(e.g. `alpha = 0.3`, `num-beams = 8`). Flags given on the command line win.";

// Keys in a config file without a [section] belong to the chosen subcommand.
class FlatConfig : public CLI::ConfigINI {
 public:
  explicit FlatConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") {
        item.parents = {subs.front()->get_name()};
      }
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

// Options forwarded to the library only when given (flag or config file).
class OptionSet {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key,
                   const std::string& help) {
    auto slot = std::make_shared<std::optional<T>>();
    emit_.push_back([slot, key](Json& j) {
      if (*slot) j[key] = **slot;
    });
    return app->add_option(flag, *slot, help);
  }

  template <typename T>
  CLI::Option* add_list(CLI::App* app, const std::string& flag, const std::string& key,
                        const std::string& help) {
    auto slot = std::make_shared<std::vector<T>>();
    emit_.push_back([slot, key](Json& j) {
      if (!slot->empty()) j[key] = *slot;
    });
    return app->add_option(flag, *slot, help)->delimiter(',');
  }

  Json build() const {
    Json j = Json::object();
    for (const auto& e : emit_) e(j);
    return j;
  }

 private:
  std::vector<std::function<void(Json&)>> emit_;
};

struct CliError {
  int code;
  std::string message;
};

void check(qad_status status) {
  if (status == QAD_OK) return;
  const int code = status == QAD_ERR_INVALID_ARGUMENT ? kExitUsage : kExitData;
  throw CliError{code, std::string(qad_status_name(status)) + ": " + qad_last_error()};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { qad_string_free(p); }
  std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

struct Lm {
  qad_lm* p = nullptr;
  ~Lm() { qad_lm_free(p); }
};

struct Qe {
  qad_qe* p = nullptr;
  ~Qe() { qad_qe_free(p); }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitData, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw CliError{kExitData, "failed writing '" + path + "'"};
}

std::string with_newline(std::string s) {
  if (s.empty() || s.back() != '\n') s += '\n';
  return s;
}

void add_decode_config(OptionSet& set, CLI::App* sub, bool with_alpha = true) {
  if (with_alpha) {
    set.add<double>(sub, "--alpha", "alpha", "weight of the translation score in [0, 1]");
  }
  set.add<int>(sub, "--num-beams", "num_beams", "beam width");
  set.add<int>(sub, "--topk", "topk", "extensions per beam scored by QE");
  set.add<int>(sub, "--max-len", "max_len", "maximum generated tokens, EOS included");
  set.add<double>(sub, "--logprob-floor", "logprob_floor", "clamp for log 0");
  set.add<bool>(sub, "--include-eos-in-qe", "include_eos_in_qe", "score EOS with QE (true|false)");
}

void add_qe_choice(OptionSet& set, CLI::App* sub, std::string& qe_model) {
  sub->add_option("--qe-model", qe_model, "trained token-QE model file")->check(CLI::ExistingFile);
  set.add<std::string>(sub, "--qe", "qe", "none | oracle | trained")
      ->check(CLI::IsMember({"none", "oracle", "trained"}));
  set.add<double>(sub, "--p-match", "p_match", "oracle P(GOOD) while matching the reference");
  set.add<double>(sub, "--p-miss", "p_miss", "oracle P(GOOD) after diverging");
}

void load_models(const std::string& lm_path, const std::string& qe_path, Lm& lm, Qe& qe) {
  if (!lm_path.empty()) check(qad_lm_load(lm_path.c_str(), &lm.p));
  if (!qe_path.empty()) check(qad_qe_load(qe_path.c_str(), &qe.p));
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-aware decoding toolkit"};
  app.name("qad");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", kConfigHelp);
  app.config_formatter(std::make_shared<FlatConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", std::string(qad_version()));

  std::function<void()> action;
  std::string in_path, out_path, lm_path, qe_path, valid_path;
  std::optional<int> synthetic;
  std::optional<long long> seed;

  // train-lm
  OptionSet lm_opts;
  auto* train_lm = app.add_subcommand("train-lm", "Train the n-gram translation model");
  train_lm->add_option("--corpus", in_path, "source<TAB>target per line")
      ->required()->check(CLI::ExistingFile);
  train_lm->add_option("--out", out_path, "model file to write")->required();
  lm_opts.add<int>(train_lm, "--order", "order", "n-gram order");
  lm_opts.add<double>(train_lm, "--add-k", "add_k", "additive smoothing constant");
  lm_opts.add<double>(train_lm, "--channel-weight", "channel_weight", "source channel mixture weight");
  train_lm->callback([&] {
    action = [&] {
      Lm lm;
      OwnedString summary;
      check(qad_lm_train(in_path.c_str(), lm_opts.build().dump().c_str(), &lm.p, &summary.p));
      check(qad_lm_save(lm.p, out_path.c_str()));
      write_output("", with_newline(summary.str()));
    };
  });

  // annotate
  OptionSet ann_opts;
  auto* annotate = app.add_subcommand("annotate", "Turn MQM error spans into GOOD/BAD/MASK token labels");
  annotate->add_option("--input", in_path, "MQM TSV with header")->required()->check(CLI::ExistingFile);
  annotate->add_option("--out", out_path, "JSON-lines labeled examples")->required();
  ann_opts.add<std::string>(annotate, "--tokenizer", "tokenizer", "chunk | whitespace")
      ->check(CLI::IsMember({"chunk", "whitespace"}));
  ann_opts.add<int>(annotate, "--chunk-chars", "chunk_chars", "max code points per chunk");
  annotate->callback([&] {
    action = [&] {
      OwnedString stats;
      check(qad_annotate(in_path.c_str(), out_path.c_str(), ann_opts.build().dump().c_str(), &stats.p));
      write_output("", with_newline(stats.str()));
    };
  });

  // train-qe
  OptionSet qe_opts;
  auto* train_qe = app.add_subcommand("train-qe", "Train the token-level QE classifier");
  train_qe->add_option("--data", in_path, "labeled examples")->required()->check(CLI::ExistingFile);
  train_qe->add_option("--valid", valid_path, "validation examples (early stopping)")
      ->check(CLI::ExistingFile);
  train_qe->add_option("--lm", lm_path, "share this translation model's vocabulary")
      ->check(CLI::ExistingFile);
  train_qe->add_option("--out", out_path, "model file to write")->required();
  qe_opts.add<double>(train_qe, "--weight-good", "weight_good", "loss weight of GOOD tokens");
  qe_opts.add<double>(train_qe, "--weight-bad", "weight_bad", "loss weight of BAD tokens");
  qe_opts.add<int>(train_qe, "--epochs", "epochs", "maximum epochs");
  qe_opts.add<double>(train_qe, "--learning-rate", "learning_rate", "SGD step size");
  qe_opts.add<double>(train_qe, "--l2", "l2", "L2 penalty");
  qe_opts.add<int>(train_qe, "--batch-size", "batch_size", "minibatch size");
  qe_opts.add<long long>(train_qe, "--seed", "seed", "shuffle seed");
  qe_opts.add<int>(train_qe, "--patience", "patience", "epochs without validation gain");
  train_qe->callback([&] {
    action = [&] {
      Lm lm;
      Qe qe;
      load_models(lm_path, "", lm, qe);
      OwnedString report;
      check(qad_qe_train(in_path.c_str(), or_null(valid_path), lm.p, qe_opts.build().dump().c_str(),
                         &qe.p, &report.p));
      check(qad_qe_save(qe.p, out_path.c_str()));
      write_output("", with_newline(report.str()));
    };
  });

  // decode
  OptionSet dec_opts;
  auto* decode = app.add_subcommand("decode", "Beam, quality-aware beam or exhaustive decoding");
  decode->add_option("--lm", lm_path, "translation model")->required()->check(CLI::ExistingFile);
  decode->add_option("--input", in_path, "source[<TAB>reference] per line")
      ->required()->check(CLI::ExistingFile);
  decode->add_option("--out", out_path, "JSON-lines output (default stdout)");
  dec_opts.add<std::string>(decode, "--search", "search", "beam | qa | exhaustive")
      ->check(CLI::IsMember({"beam", "qa", "exhaustive"}));
  add_decode_config(dec_opts, decode);
  add_qe_choice(dec_opts, decode, qe_path);
  dec_opts.add<long long>(decode, "--budget", "budget", "exhaustive search space limit");
  decode->callback([&] {
    action = [&] {
      Lm lm;
      Qe qe;
      load_models(lm_path, qe_path, lm, qe);
      OwnedString out;
      check(qad_decode(lm.p, qe.p, in_path.c_str(), dec_opts.build().dump().c_str(), &out.p));
      write_output(out_path, out.str());
    };
  });

  // rerank
  OptionSet rr_opts;
  auto* rerank = app.add_subcommand("rerank", "Re-rank a decode output with QE");
  rerank->add_option("--lm", lm_path, "translation model")->required()->check(CLI::ExistingFile);
  rerank->add_option("--nbest", in_path, "decode output")->required()->check(CLI::ExistingFile);
  rerank->add_option("--out", out_path, "JSON-lines output (default stdout)");
  add_decode_config(rr_opts, rerank);
  add_qe_choice(rr_opts, rerank, qe_path);
  rerank->callback([&] {
    action = [&] {
      Lm lm;
      Qe qe;
      load_models(lm_path, qe_path, lm, qe);
      OwnedString out;
      check(qad_rerank(lm.p, qe.p, in_path.c_str(), rr_opts.build().dump().c_str(), &out.p));
      write_output(out_path, out.str());
    };
  });

  // mbr
  OptionSet mbr_opts;
  auto* mbr = app.add_subcommand("mbr", "Epsilon sampling + minimum Bayes risk selection");
  mbr->add_option("--lm", lm_path, "translation model")->required()->check(CLI::ExistingFile);
  mbr->add_option("--input", in_path, "source[<TAB>reference] per line")
      ->required()->check(CLI::ExistingFile);
  mbr->add_option("--out", out_path, "JSON-lines output (default stdout)");
  mbr_opts.add<double>(mbr, "--epsilon", "epsilon", "drop tokens below this probability");
  mbr_opts.add<int>(mbr, "--samples", "count", "samples per source");
  mbr_opts.add<long long>(mbr, "--seed", "seed", "sampling seed");
  mbr_opts.add<int>(mbr, "--max-len", "max_len", "maximum sample length");
  mbr_opts.add<double>(mbr, "--logprob-floor", "logprob_floor", "clamp for log 0");
  mbr_opts.add<std::string>(mbr, "--utility", "utility", "token_f1 | chrf")
      ->check(CLI::IsMember({"token_f1", "chrf"}));
  mbr->callback([&] {
    action = [&] {
      Lm lm;
      Qe qe;
      load_models(lm_path, "", lm, qe);
      OwnedString out;
      check(qad_mbr(lm.p, in_path.c_str(), mbr_opts.build().dump().c_str(), &out.p));
      write_output(out_path, out.str());
    };
  });

  // sweep and compare share corpus selection
  auto add_corpus = [&](CLI::App* sub) {
    auto* l = sub->add_option("--lm", lm_path, "translation model")->check(CLI::ExistingFile);
    auto* i = sub->add_option("--input", in_path, "source<TAB>reference per line")
                  ->check(CLI::ExistingFile);
    auto* s = sub->add_option("--synthetic", synthetic,
                              "use N constructed split-mass sentences with the oracle QE");
    s->excludes(l)->excludes(i);
    sub->add_option("--out", out_path, "JSON output (default stdout)");
  };
  auto corpus_options = [&](Json j) {
    if (synthetic) {
      j["synthetic"] = {{"seed", seed.value_or(1)}, {"sentences", *synthetic}};
    } else if (lm_path.empty() || in_path.empty()) {
      throw CliError{kExitUsage, "give --lm and --input, or --synthetic N"};
    }
    return j;
  };

  OptionSet sw_opts;
  auto* sweep = app.add_subcommand("sweep", "Quality of N-best re-ranking across alpha values");
  add_corpus(sweep);
  add_qe_choice(sw_opts, sweep, qe_path);
  add_decode_config(sw_opts, sweep, false);
  sw_opts.add<int>(sweep, "--nbest", "nbest", "beam width of the N-best lists");
  sw_opts.add_list<double>(sweep, "--alpha-grid", "alpha_grid", "comma-separated alphas");
  sw_opts.add<std::string>(sweep, "--metric", "metric", "token_f1 | chrf")
      ->check(CLI::IsMember({"token_f1", "chrf"}));
  sweep->add_option("--seed", seed, "seed of the synthetic corpus");
  sweep->callback([&] {
    action = [&] {
      const Json opts = corpus_options(sw_opts.build());
      Lm lm;
      Qe qe;
      load_models(lm_path, qe_path, lm, qe);
      OwnedString out;
      check(qad_sweep(lm.p, qe.p, or_null(in_path), opts.dump().c_str(), &out.p));
      write_output(out_path, with_newline(out.str()));
    };
  });

  OptionSet cmp_opts;
  auto* compare = app.add_subcommand("compare", "Compare decoding strategies with bootstrap tests");
  add_corpus(compare);
  add_qe_choice(cmp_opts, compare, qe_path);
  add_decode_config(cmp_opts, compare);
  cmp_opts.add_list<std::string>(compare, "--strategies", "strategies",
                                 "comma-separated: beam,beam_rerank,qa,qa_rerank,mbr");
  cmp_opts.add<int>(compare, "--rerank-beams", "rerank_beams", "N-best width for beam_rerank");
  cmp_opts.add<double>(compare, "--epsilon", "epsilon", "MBR sampling epsilon");
  cmp_opts.add<int>(compare, "--samples", "samples", "MBR samples per segment");
  cmp_opts.add<int>(compare, "--doc-k", "doc_k", "concatenate k segments into one document");
  cmp_opts.add<int>(compare, "--bootstrap-resamples", "bootstrap_resamples", "bootstrap resamples");
  cmp_opts.add<long long>(compare, "--bootstrap-seed", "bootstrap_seed", "bootstrap seed");
  cmp_opts.add<std::string>(compare, "--metric", "metric", "token_f1 | chrf")
      ->check(CLI::IsMember({"token_f1", "chrf"}));
  cmp_opts.add_list<std::string>(compare, "--exclude", "exclude",
                                 "segment ids left out of the correlation");
  compare->add_option("--seed", seed, "sampling seed (and synthetic corpus seed)");
  compare->callback([&] {
    action = [&] {
      Json opts = corpus_options(cmp_opts.build());
      if (seed) opts["seed"] = *seed;
      Lm lm;
      Qe qe;
      load_models(lm_path, qe_path, lm, qe);
      OwnedString out;
      check(qad_compare(lm.p, qe.p, or_null(in_path), opts.dump().c_str(), &out.p));
      write_output(out_path, with_newline(out.str()));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    if (action) action();
  } catch (const CliError& e) {
    std::cerr << "qad: " << e.message << "\n";
    if (e.code == kExitUsage) std::cerr << "Run with --help for more information.\n";
    return e.code;
  }
  return 0;
}
