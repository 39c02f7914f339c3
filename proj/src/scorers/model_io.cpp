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

#include "scorers/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "core/error.hpp"

namespace qad {

namespace {

[[noreturn]] void data_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::kData, "model file line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const std::string& ModelRecord::field(std::size_t i) const {
  if (i >= fields.size()) data_error(line, "missing field for '" + key + "'");
  return fields[i];
}

long long ModelRecord::as_int(std::size_t i) const {
  const std::string& s = field(i);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    data_error(line, "bad integer '" + s + "'");
  }
  return v;
}

double ModelRecord::as_real(std::size_t i) const {
  const std::string& s = field(i);
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) data_error(line, "bad real '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    data_error(line, "bad real '" + s + "'");
  }
}

ModelWriter::ModelWriter(std::ostream& out, std::string_view kind) : out_(out) {
  out_ << kModelMagic << '\n';
  out_ << "format_version " << kModelFormatVersion << '\n';
  out_ << "kind " << kind << '\n';
}

void ModelWriter::put(std::string_view key, std::string_view value) {
  out_ << key << ' ' << value << '\n';
}

void ModelWriter::put(std::string_view key, long long value) {
  out_ << key << ' ' << value << '\n';
}

void ModelWriter::put_real(std::string_view key, double value) {
  out_ << key << ' ' << format_real(value) << '\n';
}

void ModelWriter::put_line(std::string_view key, const std::vector<std::string>& fields) {
  out_ << key;
  for (const auto& f : fields) out_ << ' ' << f;
  out_ << '\n';
}

void ModelWriter::put_vocab(const Vocabulary& vocab) {
  put("vocab_size", static_cast<long long>(vocab.size()));
  for (const auto& t : vocab.tokens()) put("token", t);
}

void ModelWriter::finish() {
  out_ << "end\n";
  if (!out_) fail(ErrorKind::kIo, "failed writing model");
}

ModelReader::ModelReader(std::istream& in, std::string_view kind) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next() || line != kModelMagic) data_error(1, "missing QAD1 magic header");
  bool ended = false;
  while (next()) {
    if (line.empty()) continue;
    if (line == "end") {
      ended = true;
      break;
    }
    ModelRecord rec;
    rec.line = lineno;
    auto parts = split_whitespace(line);
    rec.key = parts.front();
    rec.fields.assign(parts.begin() + 1, parts.end());
    records_.push_back(std::move(rec));
  }
  if (!ended) data_error(lineno, "truncated model (no 'end' line)");
  if (single("format_version").as_int(0) != kModelFormatVersion) {
    data_error(single("format_version").line, "unsupported format version");
  }
  if (single("kind").field(0) != kind) {
    data_error(single("kind").line,
               "expected model kind '" + std::string(kind) + "', found '" +
                   single("kind").field(0) + "'");
  }
}

const ModelRecord& ModelReader::single(std::string_view key) const {
  const ModelRecord* found = nullptr;
  for (const auto& r : records_) {
    if (r.key != key) continue;
    if (found != nullptr) data_error(r.line, "duplicate key '" + std::string(key) + "'");
    found = &r;
  }
  if (found == nullptr) fail(ErrorKind::kData, "model file: missing key '" + std::string(key) + "'");
  return *found;
}

std::vector<const ModelRecord*> ModelReader::all(std::string_view key) const {
  std::vector<const ModelRecord*> out;
  for (const auto& r : records_) {
    if (r.key == key) out.push_back(&r);
  }
  return out;
}

Vocabulary ModelReader::vocab() const {
  const auto n = single("vocab_size").as_int(0);
  std::vector<std::string> tokens;
  for (const auto* r : all("token")) tokens.push_back(r->field(0));
  if (static_cast<long long>(tokens.size()) != n) {
    fail(ErrorKind::kData, "model file: vocab_size does not match token count");
  }
  return Vocabulary::from_token_list(tokens);
}

}  // namespace qad
