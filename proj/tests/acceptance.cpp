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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and time budgets are fixed below.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "golden.hpp"
#include "support.hpp"
#include "topicsent/baselines.hpp"
#include "topicsent/cli.hpp"
#include "topicsent/lda.hpp"
#include "topicsent/lstm.hpp"
#include "topicsent/lstm_train.hpp"
#include "topicsent/sentiment.hpp"
#include "topicsent/util.hpp"

using namespace topicsent;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr double kPosteriorTv = 0.05;
constexpr double kPlantedCosine = 0.90;
constexpr double kNormTolerance = 1e-9;
constexpr double kGradRelError = 1e-4;
constexpr double kLstmAccuracy = 0.95;
constexpr double kBaselineAccuracy = 0.99;
constexpr double kSplitTolerance = 0.002;

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

// ---- 1, 2: sentiment ------------------------------------------------------

Outcome golden_suite() {
  const auto lex = sentiment::Lexicon::seed();
  int ok = 0;
  std::string first_bad;
  for (const auto& g : golden::kGolden) {
    const auto r = sentiment::score_text(g.text, lex);
    const bool match = r.positive == g.p && r.negative == g.n && r.polarity == g.polarity && r.trace() == g.trace;
    ok += match;
    if (!match && first_bad.empty()) first_bad = g.text;
  }
  const int total = static_cast<int>(std::size(golden::kGolden));
  return {ok == total && total == 9, std::to_string(ok) + "/" + std::to_string(total) + " comments exact" +
                                         (first_bad.empty() ? "" : "; first mismatch: " + first_bad)};
}

Outcome polarity_grid() {
  int pos = 0, neg = 0, neu = 0, wrong = 0;
  for (int p = 1; p <= 5; ++p)
    for (int n = -5; n <= -1; ++n) {
      const auto got = sentiment::polarity(p, n);
      const auto want = p > -n   ? sentiment::Polarity::positive
                        : p < -n ? sentiment::Polarity::negative
                                 : sentiment::Polarity::neutral;
      wrong += got != want;
      pos += got == sentiment::Polarity::positive;
      neg += got == sentiment::Polarity::negative;
      neu += got == sentiment::Polarity::neutral;
    }
  return {wrong == 0 && pos == 10 && neg == 10 && neu == 5, std::to_string(pos) + " positive, " + std::to_string(neg) +
                                                                 " negative, " + std::to_string(neu) + " neutral"};
}

// ---- 3, 4, 5: LDA ---------------------------------------------------------

std::shared_ptr<const lda::Corpus> lda_corpus(std::vector<std::vector<TokenId>> docs, int v) {
  auto c = std::make_shared<lda::Corpus>();
  c->vocab_size = v;
  c->docs = std::move(docs);
  for (std::size_t d = 0; d < c->docs.size(); ++d) c->ids.push_back("d" + std::to_string(d));
  return c;
}

lda::Hyperparams lda_params(int k, double alpha, double beta, int iterations, std::uint64_t seed) {
  lda::Hyperparams hp;
  hp.topics = k;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.iterations = iterations;
  hp.burn_in = iterations / 5;
  hp.seed = seed;
  return hp;
}

Outcome enumeration_oracle() {
  const std::vector<std::vector<int>> docs = {{0, 1, 1, 2}, {2, 2}, {0, 2, 1}};
  auto m = lda::init_assignments(lda_corpus({docs.begin(), docs.end()}, 3), lda_params(2, 1, 1, 0, 5));
  const auto exact = support::lda_exact_posterior(docs, 2, 3, 1.0, 1.0);
  for (int s = 0; s < 1000; ++s) lda::gibbs_sweep(m);
  constexpr int kSamples = 100000;
  std::vector<double> freq(exact.size(), 0.0);
  for (int s = 0; s < kSamples; ++s) {
    lda::gibbs_sweep(m);
    freq[support::state_index(m.assignments, 2)] += 1.0 / kSamples;
  }
  const double tv = support::total_variation(freq, exact);
  return {tv < kPosteriorTv, "TV " + fmt(tv) + " over " + std::to_string(exact.size()) + " states, " +
                                 std::to_string(kSamples) + " samples"};
}

Outcome planted_recovery() {
  const auto planted = support::planted_corpus(5, 50, 500, 50, 0.1, 0.1, 21);
  const auto r = lda::train(lda_corpus(planted.docs, 50), lda_params(5, 0.1, 0.01, 500, 1));
  const double cos = support::greedy_matched_cosine(planted.phi, lda::estimate_phi(r.model));
  return {cos >= kPlantedCosine, "mean matched cosine " + fmt(cos)};
}

Outcome lda_invariants() {
  Rng rng(11);
  std::vector<std::vector<TokenId>> docs(1000);
  for (auto& d : docs) {
    d.resize(rng.below(40));
    for (auto& w : d) w = static_cast<TokenId>(rng.below(200));
  }
  auto corpus = lda_corpus(std::move(docs), 200);
  const auto hp = lda_params(10, 0.1, 0.01, 0, 9);
  auto m = lda::init_assignments(corpus, hp);
  constexpr int kSweeps = 25;
  double worst = 0;
  for (int s = 0; s < kSweeps; ++s) {
    lda::gibbs_sweep(m);
    m.check_counts();
    if (m.total_tokens() != static_cast<std::int64_t>(corpus->token_count())) return {false, "token count drifted"};
    const auto phi = lda::estimate_phi(m);
    const auto theta = lda::estimate_theta(m);
    worst = std::max({worst, (phi.rowwise().sum().array() - 1).abs().maxCoeff(),
                      (theta.rowwise().sum().array() - 1).abs().maxCoeff()});
  }
  auto hp_run = lda_params(10, 0.1, 0.01, 30, 9);
  const auto a = lda::train(corpus, hp_run);
  const auto b = lda::train(corpus, hp_run);
  const bool same = a.model.assignments == b.model.assignments;
  return {worst <= kNormTolerance && same, std::to_string(kSweeps) + " sweeps checked, max row-sum error " + fmt(worst) +
                                               (same ? ", seeded reruns identical" : ", seeded reruns DIFFER")};
}

// ---- 6, 7: LSTM -----------------------------------------------------------

Outcome gradient_check() {
  // T = 5 tokens per sequence, D = 3, H = 4 in both layers.
  double worst = 0;
  std::string where;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto m = support::random_classifier(8, 3, 4, 4, seed);
    m.train_embeddings = true;
    const auto g = support::gradient_check(m, {{{0, 1, 2, 3, 4}, 2}, {{5, 6, 1, 0, 3}, 4}, {{7, 2, 2, 6, 1}, 0}});
    if (g.max_rel_error > worst) {
      worst = g.max_rel_error;
      where = g.worst_tensor;
    }
  }
  return {worst < kGradRelError, "max relative error " + fmt(worst) + " (" + where + ")"};
}

Outcome lstm_learning() {
  // The label is the number of marker tokens (id 0) among random filler.
  constexpr int kVocab = 20;
  Rng rng(5);
  std::vector<lstm::Example> data;
  for (int i = 0; i < 500; ++i) {
    lstm::Example e;
    e.label = static_cast<int>(rng.below(lstm::kNumClasses));
    const auto filler = 3 + rng.below(5);
    for (std::uint64_t t = 0; t < filler; ++t) e.tokens.push_back(static_cast<TokenId>(1 + rng.below(kVocab - 1)));
    for (int c = 0; c < e.label; ++c)
      e.tokens.insert(e.tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(e.tokens.size() + 1)), 0);
    data.push_back(std::move(e));
  }
  lstm::TrainConfig cfg;
  cfg.hidden1 = 16;
  cfg.hidden2 = 16;
  cfg.batch_size = 16;
  cfg.epochs = 20;
  cfg.learning_rate = 1e-2;
  cfg.max_len = 20;
  cfg.seed = 4;
  lstm::Matrix<double> emb(kVocab + 2, 8);
  Rng erng(6);
  for (Eigen::Index i = 0; i < emb.size(); ++i) emb.data()[i] = erng.uniform(-1, 1);
  emb.row(kVocab + 1).setZero();
  const auto r = lstm::train(lstm::init_model(std::move(emb), cfg), data, {}, cfg);
  const double acc = lstm::accuracy(r.model, data);
  return {acc >= kLstmAccuracy, "training accuracy " + fmt(acc) + " after " + std::to_string(r.history.size()) +
                                    " epochs (count of marker tokens)"};
}

// ---- CLI helpers ----------------------------------------------------------

int cli_run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string run_pipeline(const fs::path& conf, const fs::path& out, const std::vector<std::string>& stages,
                         const std::vector<std::string>& extra = {}) {
  for (const auto& s : stages) {
    std::vector<std::string> args = {s, "--config", conf.string(), "--out", out.string()};
    if (s == "train") args.insert(args.end(), {"--threads", "1"});
    args.insert(args.end(), extra.begin(), extra.end());
    std::string err;
    if (cli_run(args, &err) != 0) return s + " failed: " + err;
  }
  return {};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

// ---- 8: baselines ---------------------------------------------------------

Outcome baseline_sanity() {
  const std::vector<std::string> a = {"mask", "safe", "home", "vaccine", "hope", "care"};
  const std::vector<std::string> b = {"hoax", "panic", "fear", "lie", "angry", "riot"};
  const std::vector<std::string> filler = {"today", "people", "city", "news", "week", "post", "time", "read"};
  auto make = [&](int n, std::uint64_t seed, std::vector<std::vector<std::string>>& docs, std::vector<int>& y) {
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(rng.below(2));
      std::vector<std::string> d;
      for (int k = 0; k < 3; ++k) d.push_back((c ? b : a)[rng.below(a.size())]);
      for (int k = 0; k < 4; ++k) d.push_back(filler[rng.below(filler.size())]);
      docs.push_back(std::move(d));
      y.push_back(c ? 1 : 3);
    }
  };
  std::vector<std::vector<std::string>> tr, te;
  std::vector<int> ytr, yte;
  make(400, 11, tr, ytr);
  make(200, 12, te, yte);
  const auto rows = baselines::compare_classical(tr, ytr, te, yte, baselines::CompareOptions{1, 50000, 5, 1});
  std::string detail;
  bool pass = rows.size() == 4;
  for (const auto& r : rows) {
    pass = pass && r.report.accuracy >= kBaselineAccuracy;
    detail += r.method + " " + fmt(r.report.accuracy) + ", ";
  }

  // Through the CLI: lexicon-labelled toy comments, five methods on one split.
  const auto dir = support::scratch_dir("acceptance_compare");
  const std::vector<std::string> pos = {"love", "hope", "great", "happy", "safe", "thank"};
  const std::vector<std::string> neg = {"hate", "scary", "awful", "panic", "sad", "angry"};
  Rng rng(3);
  std::string jsonl;
  for (int i = 0; i < 240; ++i) {
    const bool p = rng.below(2) == 0;
    std::string body;
    for (int k = 0; k < 2; ++k) body += (p ? pos : neg)[rng.below(pos.size())] + " ";
    for (int k = 0; k < 4; ++k) body += filler[rng.below(filler.size())] + " ";
    jsonl += json({{"id", "a" + std::to_string(i)}, {"subreddit", "Coronavirus"}, {"body", body}}).dump() + "\n";
  }
  write_file(dir / "toy.jsonl", jsonl);
  write_file(dir / "toy.conf",
             "corpus = toy.jsonl\nvocab.min_df = 1\ntrain.min_df = 1\nbaselines.min_df = 1\nlda.topics = 2\n"
             "lda.iterations = 20\nlda.burn_in = 5\ntrain.epochs = 3\ntrain.hidden1 = 8\ntrain.hidden2 = 8\ntrain.embedding_dim = 8\n");
  const auto out = dir / "out";
  const auto failure = run_pipeline(dir / "toy.conf", out, {"preprocess", "sentiment", "train", "compare"});
  if (!failure.empty()) return {false, detail + "CLI " + failure};
  const auto csv = lines(read_file(out / "compare.csv"));
  const auto report = json::parse(read_file(out / "compare_report.json"));
  std::size_t test_rows = 0;
  for (const auto& l : lines(read_file(out / "split.tsv"))) test_rows += l[0] != '#' && l.back() == 'E';
  bool same_split = report["methods"].size() == 5;
  for (const auto& m : report["methods"])
    same_split = same_split && m["report"]["count"] == test_rows &&
                 m["report"]["gold_counts"] == report["methods"][0]["report"]["gold_counts"];
  std::string methods;
  for (std::size_t i = 1; i < csv.size(); ++i) methods += csv[i].substr(0, csv[i].find(',')) + (i + 1 < csv.size() ? "/" : "");
  pass = pass && csv.size() == 6 && same_split;
  return {pass, detail + "CLI csv " + methods + " on " + std::to_string(test_rows) + " shared test comments"};
}

// ---- 9: pipeline determinism ----------------------------------------------

Outcome pipeline_determinism() {
  const auto conf = support::data_dir() / "fixture.conf";
  const std::vector<std::string> stages = {"preprocess", "topics", "sentiment", "train", "compare"};
  std::map<std::string, std::string> runs[2];
  for (int r = 0; r < 2; ++r) {
    const auto out = support::scratch_dir("acceptance_pipeline_" + std::to_string(r));
    const auto failure = run_pipeline(conf, out, stages);
    if (!failure.empty()) return {false, "run " + std::to_string(r + 1) + ": " + failure};
    for (const auto& e : fs::directory_iterator(out)) runs[r][e.path().filename().string()] = read_file(e.path());
  }
  std::size_t differing = 0;
  std::string first;
  for (const auto& [name, bytes] : runs[0]) {
    const auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != bytes) {
      ++differing;
      if (first.empty()) first = name;
    }
  }
  const bool pass = differing == 0 && runs[0].size() == runs[1].size() && runs[0].size() >= 17;
  return {pass, std::to_string(runs[0].size()) + " artifacts, " + std::to_string(differing) + " differ" +
                    (first.empty() ? "" : " (first: " + first + ")")};
}

// ---- 10: optional full dataset --------------------------------------------

std::optional<Outcome> full_dataset() {
  const char* dataset = std::getenv("TOPICSENT_KAGGLE_DATASET");
  if (!dataset || !*dataset) return std::nullopt;
  const auto dir = support::scratch_dir("acceptance_full");
  std::string conf_text;
  if (const char* base = std::getenv("TOPICSENT_KAGGLE_CONFIG"); base && *base) conf_text = read_file(base) + "\n";
  conf_text += "corpus = " + fs::absolute(dataset).string() + "\n";
  write_file(dir / "full.conf", conf_text);
  const auto out = dir / "out";
  const auto failure = run_pipeline(dir / "full.conf", out, {"preprocess", "sentiment", "train", "evaluate", "compare"});
  if (!failure.empty()) return Outcome{false, failure};
  std::size_t train = 0, test = 0;
  for (const auto& l : lines(read_file(out / "split.tsv"))) {
    if (l[0] == '#') continue;
    (l.back() == 'E' ? test : train) += 1;
  }
  const bool sizes = std::abs(static_cast<double>(train) - 338666.0) <= kSplitTolerance * 338666.0 &&
                     std::abs(static_cast<double>(test) - 112888.0) <= kSplitTolerance * 112888.0;
  const auto report = json::parse(read_file(out / "compare_report.json"));
  double lstm_acc = 0, best_baseline = 0;
  for (const auto& m : report["methods"]) {
    const double acc = m["report"]["accuracy"];
    if (m["method"] == "lstm") lstm_acc = acc;
    else best_baseline = std::max(best_baseline, acc);
  }
  return Outcome{sizes && lstm_acc >= best_baseline,
                 "split " + std::to_string(train) + "/" + std::to_string(test) + ", lstm " + fmt(lstm_acc) +
                     " vs best baseline " + fmt(best_baseline) + " (reference accuracy 0.8115, informational)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<std::optional<Outcome>()> check;
  };
  auto wrap = [](Outcome (*f)()) { return [f]() -> std::optional<Outcome> { return f(); }; };
  const std::vector<Criterion> criteria = {
      {1, "golden sentiment traces", 1, wrap(golden_suite)},
      {2, "polarity grid", 1, wrap(polarity_grid)},
      {3, "LDA posterior vs enumeration", 30, wrap(enumeration_oracle)},
      {4, "LDA planted topic recovery", 60, wrap(planted_recovery)},
      {5, "LDA invariants and determinism", 60, wrap(lda_invariants)},
      {6, "LSTM gradient check", 10, wrap(gradient_check)},
      {7, "LSTM separable task", 120, wrap(lstm_learning)},
      {8, "baselines and comparison table", 60, wrap(baseline_sanity)},
      {9, "pipeline determinism on fixture", 300, wrap(pipeline_determinism)},
      {10, "full dataset integration", 1e9, full_dataset},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<Outcome> o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << std::setw(2) << c.id << " " << std::left << std::setw(34) << c.name << std::right;
    if (!o) {
      std::cout << line.str() << " SKIP  (set TOPICSENT_KAGGLE_DATASET to run)\n";
      continue;
    }
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o->pass && in_time;
    failures += !pass;
    line << " " << (pass ? "PASS" : "FAIL") << "  " << std::fixed << std::setprecision(2) << secs << "s";
    if (c.budget_seconds < 1e8) line << " (budget " << std::setprecision(0) << c.budget_seconds << "s)";
    line << "  " << o->detail;
    if (!in_time) line << "; over time budget";
    std::cout << line.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
