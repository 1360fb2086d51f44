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

#include "topicsent/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <unordered_map>

#include "topicsent/baselines.hpp"
#include "topicsent/corpus.hpp"
#include "topicsent/dendrogram.hpp"
#include "topicsent/embed.hpp"
#include "topicsent/lda.hpp"
#include "topicsent/lstm_train.hpp"
#include "topicsent/sentiment.hpp"
#include "topicsent/split.hpp"
#include "topicsent/util.hpp"

namespace topicsent::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const fs::path& require_corpus(const PipelineConfig& cfg) {
  if (cfg.corpus.empty()) throw InputError("no corpus configured (set `corpus` or pass --set corpus=PATH)");
  return cfg.corpus;
}

std::vector<RawComment> load_comments(const PipelineConfig& cfg, StageOutput& out, IngestStats* stats = nullptr) {
  const fs::path& path = require_corpus(cfg);
  InputFormat format = format_for_path(path);
  if (cfg.format != "auto") format = *parse_input_format(cfg.format);
  out.inputs["corpus"] = file_hash(path);
  IngestStats local;
  auto comments = ingest_all(path, format, stats ? stats : &local);
  if (comments.empty()) throw InputError("corpus has no usable records: " + path.string());
  return comments;
}

// Reads an artifact produced by an earlier stage.
std::string read_artifact(const PipelineConfig& cfg, const std::string& name, const std::string& producer,
                          StageOutput& out) {
  const fs::path path = cfg.out / name;
  if (!fs::exists(path)) throw InputError("missing " + path.string() + " (run `" + producer + "` first)");
  std::string text = read_file(path);
  out.inputs[name] = hex64(fnv1a(text));
  return text;
}

StopWords load_stopwords(const PipelineConfig& cfg, StageOutput& out) {
  if (cfg.stopwords.empty()) return StopWords::english();
  out.inputs["stopwords"] = file_hash(cfg.stopwords);
  return StopWords::load(cfg.stopwords);
}

sentiment::Lexicon load_lexicon(const PipelineConfig& cfg, StageOutput& out) {
  auto lex = sentiment::Lexicon::seed();
  if (!cfg.lexicon.empty()) {
    lex.load_terms(cfg.lexicon);
    out.inputs["lexicon"] = file_hash(cfg.lexicon);
  }
  if (!cfg.boosters.empty()) {
    lex.load_boosters(cfg.boosters);
    out.inputs["boosters"] = file_hash(cfg.boosters);
  }
  return lex;
}

// Classifier input keeps stop-words: negators and intensifiers carry label
// signal.
std::vector<std::string> classifier_tokens(const RawComment& c) { return tokenize(strip_noise(c.body)); }

struct LabeledData {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> tokens;
  std::vector<int> labels;
};

LabeledData join_labels(const std::vector<RawComment>& comments, const std::string& labeled_csv) {
  const auto labeled = sentiment::CorpusLabels::parse_csv(labeled_csv);
  std::unordered_map<std::string, int> label_of;
  for (const auto& l : labeled) label_of[l.id] = static_cast<int>(l.label);
  LabeledData d;
  for (const auto& c : comments) {
    auto it = label_of.find(c.id);
    if (it == label_of.end()) throw InputError("comment '" + c.id + "' has no sentiment label (rerun `sentiment`)");
    d.ids.push_back(c.id);
    d.tokens.push_back(classifier_tokens(c));
    d.labels.push_back(it->second);
  }
  return d;
}

std::vector<lstm::Example> encode_examples(const std::vector<std::vector<std::string>>& tokens,
                                           const std::vector<int>& labels, const std::vector<std::size_t>& rows,
                                           const Vocabulary& vocab) {
  std::vector<lstm::Example> out;
  out.reserve(rows.size());
  for (std::size_t i : rows) out.push_back({encode(tokens[i], vocab, EncodeMode::classifier).tokens, labels[i]});
  return out;
}

// Test-set tokens and labels keyed by the split file, looked up in the corpus.
struct TestView {
  DataSplit split;
  std::unordered_map<std::string, std::size_t> row_of;  // id -> corpus index
};

TestView load_split(const PipelineConfig& cfg, const std::vector<RawComment>& comments, StageOutput& out) {
  TestView v;
  v.split = DataSplit::parse(read_artifact(cfg, "split.tsv", "train", out));
  for (std::size_t i = 0; i < comments.size(); ++i) v.row_of[comments[i].id] = i;
  for (const auto& id : v.split.ids)
    if (!v.row_of.count(id)) throw InputError("split references comment '" + id + "' missing from the corpus");
  return v;
}

std::vector<std::vector<std::string>> tokens_for(const TestView& v, const std::vector<RawComment>& comments,
                                                 const std::vector<std::size_t>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(classifier_tokens(comments[v.row_of.at(v.split.ids[r])]));
  return out;
}

std::vector<int> labels_for(const DataSplit& s, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(s.labels[r]);
  return out;
}

EvalReport lstm_test_report(const PipelineConfig& cfg, const TestView& view, const std::vector<RawComment>& comments,
                            StageOutput& out) {
  const auto loaded = lstm::parse_model(read_artifact(cfg, "lstm_model.txt", "train", out));
  const auto vocab = Vocabulary::from_tokens(loaded.vocab, std::vector<std::int64_t>(loaded.vocab.size(), 0), 0);
  const auto rows = view.split.indices(SplitPart::test);
  if (rows.empty()) throw InputError("split has no test rows");
  const auto docs = tokens_for(view, comments, rows);
  std::vector<lstm::Example> examples;
  examples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    examples.push_back({encode(docs[i], vocab, EncodeMode::classifier).tokens, view.split.labels[rows[i]]});
  return lstm::evaluate(loaded.model, examples, cfg.threads);
}

}  // namespace

StageOutput run_preprocess(const PipelineConfig& cfg) {
  StageOutput out;
  IngestStats stats;
  const auto comments = load_comments(cfg, out, &stats);
  const StopWords stop = load_stopwords(cfg, out);
  std::vector<std::vector<std::string>> docs;
  docs.reserve(comments.size());
  for (const auto& c : comments) docs.push_back(clean_tokens(c.body, stop));
  const auto vocab = Vocabulary::build(docs, cfg.vocab_min_df, cfg.vocab_max_size);
  EncodedCorpus enc;
  enc.vocab_size = vocab.size();
  std::size_t empty = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    enc.docs.push_back(encode(docs[i], vocab, EncodeMode::lda, comments[i].id));
    empty += enc.docs.back().empty;
  }
  json s;
  s["M"] = enc.docs.size();
  s["V"] = vocab.size();
  s["N"] = enc.token_count();
  s["empty_documents"] = empty;
  s["ingest"] = {{"records", stats.records}, {"empty_bodies", stats.empty_bodies}, {"warnings", stats.warnings}};
  out.artifacts["corpus.enc"] = enc.serialize();
  out.artifacts["vocab.tsv"] = vocab.serialize();
  out.artifacts["corpus_stats.json"] = s.dump(2) + "\n";
  out.notes.push_back("documents " + std::to_string(enc.docs.size()) + ", vocabulary " + std::to_string(vocab.size()) +
                      ", tokens " + std::to_string(enc.token_count()));
  for (const auto& m : stats.messages) out.notes.push_back("warning: " + m);
  return out;
}

StageOutput run_topics(const PipelineConfig& cfg) {
  StageOutput out;
  const auto enc = EncodedCorpus::parse(read_artifact(cfg, "corpus.enc", "preprocess", out));
  const auto vocab = Vocabulary::parse(read_artifact(cfg, "vocab.tsv", "preprocess", out));
  if (vocab.size() != enc.vocab_size) throw InputError("corpus.enc and vocab.tsv disagree on vocabulary size");
  auto corpus = std::make_shared<const lda::Corpus>(lda::Corpus::from_encoded(enc));
  if (corpus->token_count() == 0) throw InputError("encoded corpus has no tokens to model");

  const auto result = lda::train(corpus, cfg.lda_params());
  result.model.check_counts();
  const auto ranked = lda::rank_topics(result.model, cfg.top_words);
  const Eigen::MatrixXd phi = result.averaged_samples > 0 ? result.phi_mean : lda::estimate_phi(result.model);
  const auto tree = cluster_topics(phi);

  std::string loglik = "sweep,log_likelihood\n";
  for (const auto& r : result.trace) loglik += std::to_string(r.sweep) + "," + format_double(r.log_likelihood) + "\n";
  out.artifacts["lda_state.txt"] = lda::serialize_state(result.model);
  out.artifacts["topics.csv"] = lda::topic_report_csv(ranked, vocab);
  out.artifacts["wordcloud.json"] = lda::word_cloud_json(ranked, vocab);
  out.artifacts["dendrogram.nwk"] = tree.to_newick() + "\n";
  out.artifacts["dendrogram.json"] = tree.to_json();
  out.artifacts["lda_loglik.csv"] = loglik;
  out.notes.push_back("topics " + std::to_string(cfg.lda.topics) + ", sweeps " + std::to_string(result.model.sweeps) +
                      ", final log-likelihood " + format_double(result.trace.empty() ? 0.0 : result.trace.back().log_likelihood));
  return out;
}

StageOutput run_sentiment(const PipelineConfig& cfg) {
  StageOutput out;
  const auto comments = load_comments(cfg, out);
  const auto lex = load_lexicon(cfg, out);
  const auto labels = sentiment::label_corpus(comments, lex, cfg.traces);
  out.artifacts["labeled.csv"] = labels.to_csv();
  out.artifacts["sentiment_distribution.json"] = labels.distribution_json();
  if (cfg.traces) {
    std::string traces;
    for (const auto& c : labels.comments) traces += c.id + "\t" + c.trace + "\n";
    out.artifacts["traces.txt"] = traces;
  }
  const auto& d = labels.overall;
  out.notes.push_back("comments " + std::to_string(d.total) + ": positive " +
                      std::to_string(d.polarity[static_cast<int>(sentiment::Polarity::positive)]) + ", negative " +
                      std::to_string(d.polarity[static_cast<int>(sentiment::Polarity::negative)]) + ", neutral " +
                      std::to_string(d.polarity[static_cast<int>(sentiment::Polarity::neutral)]));
  return out;
}

StageOutput run_train(const PipelineConfig& cfg) {
  StageOutput out;
  const auto comments = load_comments(cfg, out);
  const auto data = join_labels(comments, read_artifact(cfg, "labeled.csv", "sentiment", out));
  const auto split = make_split(data.ids, data.labels, cfg.split_params());
  const auto pool = split.training_pool();

  std::vector<std::vector<std::string>> pool_docs;
  for (std::size_t i : pool) pool_docs.push_back(data.tokens[i]);
  const auto vocab = Vocabulary::build(pool_docs, cfg.train_min_df, cfg.vocab_max_size);

  EmbeddingTable table;
  if (!cfg.embeddings.empty()) {
    table = EmbeddingTable::load(cfg.embeddings, cfg.embedding_dim);
    out.inputs["embeddings"] = file_hash(cfg.embeddings);
  } else {
    table = random_embeddings(vocab, cfg.embedding_dim, cfg.seed);
  }
  auto emb = build_matrix<double>(table, vocab);

  const auto tc = cfg.train_params();
  auto model = lstm::init_model(std::move(emb.rows), tc);
  const auto train_set = encode_examples(data.tokens, data.labels, split.indices(SplitPart::train), vocab);
  const auto val_set = encode_examples(data.tokens, data.labels, split.indices(SplitPart::validation), vocab);
  const auto result = lstm::train(std::move(model), train_set, val_set, tc);

  out.artifacts["split.tsv"] = split.serialize();
  out.artifacts["lstm_model.txt"] = lstm::serialize_model(result.model, tc, vocab.tokens());
  out.artifacts["train_log.csv"] = result.log_csv();
  out.notes.push_back("split train " + std::to_string(split.count(SplitPart::train)) + ", validation " +
                      std::to_string(split.count(SplitPart::validation)) + ", test " +
                      std::to_string(split.count(SplitPart::test)));
  out.notes.push_back("embedding coverage " + format_fixed(emb.coverage, 4) + ", best epoch " +
                      std::to_string(result.best_epoch));
  for (const auto& w : result.warnings) out.notes.push_back("warning: " + w);
  return out;
}

StageOutput run_evaluate(const PipelineConfig& cfg) {
  StageOutput out;
  const auto comments = load_comments(cfg, out);
  const auto view = load_split(cfg, comments, out);
  const auto report = lstm_test_report(cfg, view, comments, out);
  out.artifacts["lstm_eval.json"] = report.to_json();
  out.notes.push_back("test accuracy " + format_fixed(report.accuracy, 4) + ", macro F1 " + format_fixed(report.macro_f1, 4));
  return out;
}

StageOutput run_compare(const PipelineConfig& cfg) {
  StageOutput out;
  const auto comments = load_comments(cfg, out);
  const auto view = load_split(cfg, comments, out);
  const auto pool = view.split.training_pool();
  const auto test = view.split.indices(SplitPart::test);
  if (test.empty()) throw InputError("split has no test rows");

  const auto opt = cfg.compare_params();
  auto rows = baselines::compare_classical(tokens_for(view, comments, pool), labels_for(view.split, pool),
                                           tokens_for(view, comments, test), labels_for(view.split, test), opt);
  rows.push_back({"lstm", lstm_test_report(cfg, view, comments, out), -1.0});

  json report;
  report["features"] = {{"kind", "tfidf_unigram"},
                        {"idf", "ln((1+M)/(1+df))+1"},
                        {"normalization", "l2"},
                        {"min_df", opt.min_df},
                        {"max_features", opt.max_features}};
  report["split"] = {{"seed", view.split.options.seed},
                     {"train", pool.size()},
                     {"test", test.size()},
                     {"lstm_validation", view.split.count(SplitPart::validation)}};
  report["methods"] = json::array();
  for (const auto& r : rows) {
    json m;
    m["method"] = r.method;
    m["report"] = json::parse(r.report.to_json());
    report["methods"].push_back(std::move(m));
  }
  out.artifacts["compare.csv"] = baselines::comparison_csv(rows, cfg.timing);
  out.artifacts["compare_report.json"] = report.dump(2) + "\n";
  for (const auto& r : rows) out.notes.push_back(r.method + " accuracy " + format_fixed(r.report.accuracy, 4));
  return out;
}

std::span<const std::string_view> config_scope(const std::string& stage) {
  static const std::map<std::string, std::vector<std::string_view>, std::less<>> scopes = {
      {"preprocess", {"corpus", "format", "stopwords", "vocab."}},
      {"topics", {"seed", "lda."}},
      {"sentiment", {"corpus", "format", "lexicon", "boosters", "sentiment."}},
      {"train", {"corpus", "format", "embeddings", "seed", "threads", "vocab.max_size", "split.", "train."}},
      {"evaluate", {"corpus", "format", "threads"}},
      {"compare", {"corpus", "format", "seed", "threads", "baselines."}},
  };
  auto it = scopes.find(stage);
  if (it == scopes.end()) throw InvariantError("no config scope for stage " + stage);
  return it->second;
}

std::string manifest_json(const std::string& stage, const PipelineConfig& cfg, const StageOutput& out) {
  json m;
  m["stage"] = stage;
  m["config_hash"] = cfg.hash(config_scope(stage));
  m["seed"] = cfg.seed;
  m["inputs"] = json::object();
  for (const auto& [k, v] : out.inputs) m["inputs"][k] = v;
  m["artifacts"] = json::object();
  for (const auto& [k, v] : out.artifacts) m["artifacts"][k] = hex64(fnv1a(v));
  return m.dump(2) + "\n";
}

namespace {

using StageFn = StageOutput (*)(const PipelineConfig&);

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  std::vector<std::string> sets;
  bool verify = false;
  bool trace = false;
  bool timing = false;
};

PipelineConfig resolve_config(const Options& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : PipelineConfig::load(o.config);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.trace) cfg.traces = true;
  if (o.timing) cfg.timing = true;
  cfg.validate();
  return cfg;
}

int write_stage(const std::string& stage, const PipelineConfig& cfg, const StageOutput& result, std::ostream& out) {
  for (const auto& [name, bytes] : result.artifacts) write_file(cfg.out / name, bytes);
  write_file(cfg.out / (stage + ".manifest.json"), manifest_json(stage, cfg, result));
  for (const auto& n : result.notes) out << stage << ": " << n << "\n";
  out << stage << ": wrote " << result.artifacts.size() << " artifacts to " << cfg.out.string() << "\n";
  return kOk;
}

int verify_stage(const std::string& stage, const PipelineConfig& cfg, const StageOutput& result, std::ostream& out,
                 std::ostream& err) {
  const fs::path manifest_path = cfg.out / (stage + ".manifest.json");
  if (!fs::exists(manifest_path)) throw InputError("no manifest to verify: " + manifest_path.string());
  const json recorded = json::parse(read_file(manifest_path), nullptr, false);
  if (recorded.is_discarded()) throw InputError("manifest is not valid JSON: " + manifest_path.string());
  std::size_t mismatches = 0;
  auto fail = [&](const std::string& what) {
    err << stage << ": verify mismatch: " << what << "\n";
    ++mismatches;
  };
  if (recorded.value("config_hash", "") != cfg.hash(config_scope(stage))) fail("config hash");
  if (recorded.value("seed", std::uint64_t{0}) != cfg.seed) fail("seed");
  const json& recorded_artifacts = recorded.contains("artifacts") ? recorded["artifacts"] : json::object();
  for (const auto& [name, bytes] : result.artifacts) {
    const std::string h = hex64(fnv1a(bytes));
    if (!recorded_artifacts.contains(name) || recorded_artifacts[name] != h) fail(name + " (manifest)");
    const fs::path p = cfg.out / name;
    if (!fs::exists(p) || file_hash(p) != h) fail(name + " (file)");
  }
  if (mismatches) return kInvariantError;
  out << stage << ": verified " << result.artifacts.size() << " artifacts\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"COVID comment topic and sentiment pipeline", "topicsent"};
  app.require_subcommand(1, 1);
  Options o;
  const std::vector<std::pair<std::string, StageFn>> stages = {
      {"preprocess", run_preprocess}, {"topics", run_topics}, {"sentiment", run_sentiment},
      {"train", run_train},           {"evaluate", run_evaluate}, {"compare", run_compare}};
  const std::map<std::string, std::string> about = {
      {"preprocess", "clean, tokenize and encode the corpus"},
      {"topics", "fit LDA and emit topic report, word cloud and dendrogram"},
      {"sentiment", "score comments with the lexicon and label them"},
      {"train", "split labeled comments and train the LSTM classifier"},
      {"evaluate", "score the trained LSTM on the test split"},
      {"compare", "train the classical baselines and tabulate them with the LSTM"}};
  for (const auto& [name, fn] : stages) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", o.config, "key = value config file");
    sub->add_option("--seed", o.seed, "seed for every stochastic step");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker cap; 1 is fully deterministic")->check(CLI::PositiveNumber);
    sub->add_option("--set", o.sets, "override a config key (key=value), repeatable");
    sub->add_flag("--verify", o.verify, "recompute artifacts and compare with the recorded manifest");
    if (name == "sentiment") sub->add_flag("--trace", o.trace, "also write per-comment scoring traces");
    if (name == "compare") sub->add_flag("--timing", o.timing, "record training times (not reproducible)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    for (const auto& [name, fn] : stages) {
      if (!app.got_subcommand(name)) continue;
      const PipelineConfig cfg = resolve_config(o);
      const StageOutput result = fn(cfg);
      return o.verify ? verify_stage(name, cfg, result, out, err) : write_stage(name, cfg, result, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "internal invariant violated: " << e.what() << "\n";
    return kInvariantError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariantError;
  }
  return kInputError;
}

}  // namespace topicsent::cli
