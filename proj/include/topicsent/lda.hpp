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

#ifndef TOPICSENT_LDA_HPP_
#define TOPICSENT_LDA_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "topicsent/corpus.hpp"
#include "topicsent/util.hpp"

namespace topicsent::lda {

struct Hyperparams {
  int topics = 100;
  double alpha = 0.5;  // 50 / topics
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 1;
  int loglik_every = 10;
  // Average phi/theta over post-burn-in samples (one every loglik_every
  // sweeps) instead of using the final state.
  bool average_samples = false;

  static Hyperparams with_topics(int k) {
    Hyperparams hp;
    hp.topics = k;
    hp.alpha = 50.0 / k;
    return hp;
  }
  // Throws InputError when a field is out of range.
  void validate() const;
};

using DocTopicCounts = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Token-id documents over a vocabulary of `vocab_size` words.
struct Corpus {
  int vocab_size = 0;
  std::vector<std::vector<TokenId>> docs;
  std::vector<std::string> ids;

  static Corpus from_encoded(const EncodedCorpus& encoded);
  std::size_t token_count() const;
};

// Collapsed Gibbs state. Counts are always exactly those implied by
// `assignments`.
struct Model {
  Hyperparams hp;
  std::shared_ptr<const Corpus> corpus;
  std::vector<std::vector<int>> assignments;  // z[d][n]
  DocTopicCounts doc_topic;                   // M x K
  Eigen::MatrixXi topic_word;                 // K x V
  Eigen::VectorXi topic_total;                // K
  int sweeps = 0;
  Rng rng{1};

  int topics() const { return hp.topics; }
  int vocab_size() const { return corpus->vocab_size; }
  std::size_t num_docs() const { return corpus->docs.size(); }
  std::int64_t total_tokens() const { return topic_total.cast<std::int64_t>().sum(); }

  // Rebuilds every count matrix from `assignments`.
  void recount();
  // Throws InvariantError when a count identity fails.
  void check_counts() const;
};

// Uniform random initial topic per token. Throws InputError for K < 1 or an
// empty corpus.
Model init_assignments(std::shared_ptr<const Corpus> corpus, const Hyperparams& hp);

// Resamples every token once, in document then position order, from
//   p(z = k | rest) ∝ (n_dk + α) (n_kw + β) / (n_k + Vβ)
// with the token's own assignment removed from the counts.
void gibbs_sweep(Model& model);

// Collapsed joint log p(w, z) under the model's hyperparameters.
double log_likelihood(const Model& model);

struct LogLikReading {
  int sweep = 0;
  double log_likelihood = 0;
};

struct TrainResult {
  Model model;
  std::vector<LogLikReading> trace;
  // Present when hp.average_samples: means over post-burn-in samples.
  Eigen::MatrixXd phi_mean;
  Eigen::MatrixXd theta_mean;
  int averaged_samples = 0;
};

// init_assignments followed by hp.iterations sweeps; log-likelihood recorded
// at sweep 0 and then every hp.loglik_every sweeps.
TrainResult train(std::shared_ptr<const Corpus> corpus, const Hyperparams& hp);

// φ_kw = (n_kw + β) / (n_k + Vβ), rows sum to 1.
Eigen::MatrixXd estimate_phi(const Model& model);
// θ_dk = (n_dk + α) / (len_d + Kα); empty documents get the uniform prior.
Eigen::MatrixXd estimate_theta(const Model& model);

struct WordWeight {
  TokenId word = 0;
  double weight_pct = 0;  // 100 * n_kw / Σ n
};

struct TopicSummary {
  int topic = 0;
  double proportion_pct = 0;  // 100 * n_k / Σ n
  std::vector<WordWeight> top_words;
};

// All topics by descending proportion (ties by topic id), each with its
// `top_n_words` heaviest words (ties by word id).
std::vector<TopicSummary> rank_topics(const Model& model, int top_n_words);

// CSV `rank,topic_id,proportion_pct,word_1,weight_1,...`.
std::string topic_report_csv(const std::vector<TopicSummary>& ranked, const Vocabulary& vocab);
// JSON object topic_id -> [{word, weight_pct}].
std::string word_cloud_json(const std::vector<TopicSummary>& ranked, const Vocabulary& vocab);

// Header `K V M alpha beta seed iteration`, then `doc_id<TAB>topic ids`.
std::string serialize_state(const Model& model);
Model parse_state(std::string_view text, std::shared_ptr<const Corpus> corpus);

}  // namespace topicsent::lda

#endif  // TOPICSENT_LDA_HPP_
