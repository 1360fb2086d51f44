// Copyright 2026 The topicsent Authors.
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

#include "topicsent/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "topicsent/util.hpp"

namespace topicsent {
namespace {

namespace fs = std::filesystem;

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw InputError("config key '" + std::string(key) + "' has a bad value '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InputError("config key '" + std::string(key) + "' expects a boolean, got '" + std::string(v) + "'");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string_view name;
  bool is_path;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, std::string_view)> set;
};

#define TS_INT(key, member)                                                                 \
  Field{key, false, [](const PipelineConfig& c) { return std::to_string(c.member); },      \
        [](PipelineConfig& c, std::string_view v) { c.member = parse_number<decltype(c.member)>(key, v); }}
#define TS_DOUBLE(key, member)                                                              \
  Field{key, false, [](const PipelineConfig& c) { return format_double(c.member); },       \
        [](PipelineConfig& c, std::string_view v) { c.member = parse_number<double>(key, v); }}
#define TS_BOOL(key, member)                                                                \
  Field{key, false, [](const PipelineConfig& c) { return bool_str(c.member); },            \
        [](PipelineConfig& c, std::string_view v) { c.member = parse_bool(key, v); }}
#define TS_PATH(key, member)                                                                \
  Field{key, true, [](const PipelineConfig& c) { return c.member.generic_string(); },      \
        [](PipelineConfig& c, std::string_view v) { c.member = fs::path(std::string(v)); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      TS_PATH("corpus", corpus),
      Field{"format", false, [](const PipelineConfig& c) { return c.format; },
            [](PipelineConfig& c, std::string_view v) {
              if (v != "auto" && !parse_input_format(v)) throw InputError("config key 'format' must be auto, jsonl or csv");
              c.format = std::string(v);
            }},
      TS_PATH("stopwords", stopwords),
      TS_PATH("lexicon", lexicon),
      TS_PATH("boosters", boosters),
      TS_PATH("embeddings", embeddings),
      TS_PATH("out", out),
      TS_INT("seed", seed),
      TS_INT("threads", threads),
      TS_INT("vocab.min_df", vocab_min_df),
      TS_INT("vocab.max_size", vocab_max_size),
      TS_INT("lda.topics", lda.topics),
      TS_DOUBLE("lda.alpha", lda.alpha),
      TS_DOUBLE("lda.beta", lda.beta),
      TS_INT("lda.iterations", lda.iterations),
      TS_INT("lda.burn_in", lda.burn_in),
      TS_INT("lda.loglik_every", lda.loglik_every),
      TS_BOOL("lda.average_samples", lda.average_samples),
      TS_INT("lda.top_words", top_words),
      TS_BOOL("sentiment.traces", traces),
      TS_DOUBLE("split.train_fraction", split.train_fraction),
      TS_DOUBLE("split.validation_fraction", split.validation_fraction),
      TS_INT("train.hidden1", train.hidden1),
      TS_INT("train.hidden2", train.hidden2),
      TS_INT("train.batch_size", train.batch_size),
      TS_INT("train.epochs", train.epochs),
      TS_DOUBLE("train.learning_rate", train.learning_rate),
      TS_INT("train.max_len", train.max_len),
      TS_DOUBLE("train.clip_norm", train.clip_norm),
      TS_DOUBLE("train.adam_beta1", train.adam_beta1),
      TS_DOUBLE("train.adam_beta2", train.adam_beta2),
      TS_DOUBLE("train.adam_epsilon", train.adam_epsilon),
      TS_BOOL("train.fine_tune_embeddings", train.fine_tune_embeddings),
      TS_BOOL("train.class_weights", train.class_weights),
      TS_INT("train.embedding_dim", embedding_dim),
      TS_INT("train.min_df", train_min_df),
      TS_INT("baselines.min_df", baselines.min_df),
      TS_INT("baselines.max_features", baselines.max_features),
      TS_INT("baselines.knn_k", baselines.knn_k),
      TS_BOOL("baselines.timing", timing),
  };
  return table;
}

#undef TS_INT
#undef TS_DOUBLE
#undef TS_BOOL
#undef TS_PATH

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.name == key) return &f;
  return nullptr;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (!f) throw InputError("unknown config key '" + std::string(key) + "'");
  f->set(*this, trim(value));
  // alpha follows 50 / K until it is given explicitly.
  if (key == "lda.alpha") alpha_set_ = true;
  if (key == "lda.topics" && !alpha_set_ && lda.topics > 0) lda.alpha = 50.0 / lda.topics;
}

std::vector<std::string> PipelineConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.name);
  return out;
}

PipelineConfig PipelineConfig::parse(std::string_view text, const fs::path& base_dir) {
  PipelineConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw InputError("config line " + std::to_string(lineno) + " has no '='");
    const auto key = trim(body.substr(0, eq));
    c.set(key, body.substr(eq + 1));
    const Field* f = find_field(key);
    if (f->is_path && !base_dir.empty()) {
      fs::path& p = key == "corpus"      ? c.corpus
                    : key == "stopwords" ? c.stopwords
                    : key == "lexicon"   ? c.lexicon
                    : key == "boosters"  ? c.boosters
                    : key == "embeddings" ? c.embeddings
                                          : c.out;
      if (!p.empty() && p.is_relative()) p = (base_dir / p).lexically_normal();
    }
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  return parse(read_file(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::string PipelineConfig::serialize() const {
  std::string out;
  for (const auto& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

std::string PipelineConfig::hash(std::span<const std::string_view> scope) const {
  auto in_scope = [&](std::string_view key) {
    if (scope.empty()) return true;
    return std::any_of(scope.begin(), scope.end(), [&](std::string_view s) {
      return key == s || (!s.empty() && s.back() == '.' && key.starts_with(s));
    });
  };
  std::string canon;
  for (const auto& f : fields()) {
    if (f.name == "out" || !in_scope(f.name)) continue;
    std::string value = f.get(*this);
    if (f.is_path && !value.empty()) value = fs::exists(value) ? file_hash(value) : "missing";
    canon += std::string(f.name) + "=" + value + "\n";
  }
  return hex64(fnv1a(canon));
}

lda::Hyperparams PipelineConfig::lda_params() const {
  lda::Hyperparams hp = lda;
  hp.seed = seed;
  return hp;
}

lstm::TrainConfig PipelineConfig::train_params() const {
  lstm::TrainConfig t = train;
  t.seed = seed;
  t.threads = threads;
  return t;
}

SplitOptions PipelineConfig::split_params() const {
  SplitOptions s = split;
  s.seed = seed;
  return s;
}

baselines::CompareOptions PipelineConfig::compare_params() const {
  baselines::CompareOptions o = baselines;
  o.seed = seed;
  return o;
}

void PipelineConfig::validate() const {
  for (const auto* p : {&corpus, &stopwords, &lexicon, &boosters, &embeddings})
    if (!p->empty() && !fs::exists(*p)) throw InputError("input path does not exist: " + p->string());
  if (threads < 1) throw InputError("threads must be >= 1");
  if (vocab_min_df < 1 || train_min_df < 1) throw InputError("vocab.min_df and train.min_df must be >= 1");
  if (top_words < 1) throw InputError("lda.top_words must be >= 1");
  if (embedding_dim < 1) throw InputError("train.embedding_dim must be >= 1");
  if (!(split.train_fraction > 0 && split.train_fraction < 1)) throw InputError("split.train_fraction must lie in (0, 1)");
  if (!(split.validation_fraction >= 0 && split.validation_fraction < 1))
    throw InputError("split.validation_fraction must lie in [0, 1)");
  if (baselines.min_df < 1 || baselines.knn_k < 1) throw InputError("baselines.min_df and baselines.knn_k must be >= 1");
  lda_params().validate();
  train_params().validate();
}

}  // namespace topicsent
