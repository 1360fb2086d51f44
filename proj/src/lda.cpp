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

#include "topicsent/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace topicsent::lda {

void Hyperparams::validate() const {
  if (topics < 1) throw InputError("LDA needs K >= 1 topics");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw InputError("LDA alpha must be > 0");
  if (!(beta > 0) || !std::isfinite(beta)) throw InputError("LDA beta must be > 0");
  if (iterations < 0 || burn_in < 0) throw InputError("LDA iterations and burn_in must be >= 0");
  if (!(burn_in < iterations || (iterations == 0 && burn_in == 0)))
    throw InputError("LDA burn_in must be smaller than iterations");
  if (loglik_every < 1) throw InputError("loglik_every must be >= 1");
}

Corpus Corpus::from_encoded(const EncodedCorpus& encoded) {
  Corpus c;
  c.vocab_size = static_cast<int>(encoded.vocab_size);
  c.docs.reserve(encoded.docs.size());
  for (const auto& d : encoded.docs) {
    c.docs.push_back(d.tokens);
    c.ids.push_back(d.id);
  }
  return c;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

void Model::recount() {
  const int k = hp.topics;
  doc_topic = DocTopicCounts::Zero(static_cast<Eigen::Index>(num_docs()), k);
  topic_word = Eigen::MatrixXi::Zero(k, vocab_size());
  topic_total = Eigen::VectorXi::Zero(k);
  for (std::size_t d = 0; d < num_docs(); ++d) {
    const auto& words = corpus->docs[d];
    for (std::size_t n = 0; n < words.size(); ++n) {
      const int t = assignments[d][n];
      ++doc_topic(static_cast<Eigen::Index>(d), t);
      ++topic_word(t, words[n]);
      ++topic_total(t);
    }
  }
}

void Model::check_counts() const {
  if (doc_topic.minCoeff() < 0 || topic_word.minCoeff() < 0 || topic_total.minCoeff() < 0)
    throw InvariantError("negative LDA count");
  for (std::size_t d = 0; d < num_docs(); ++d) {
    if (doc_topic.row(static_cast<Eigen::Index>(d)).sum() != static_cast<int>(corpus->docs[d].size()))
      throw InvariantError("doc-topic row " + std::to_string(d) + " does not sum to the document length");
  }
  const Eigen::VectorXi from_words = topic_word.rowwise().sum();
  const Eigen::VectorXi from_docs = doc_topic.colwise().sum().transpose();
  if (from_words != topic_total || from_docs != topic_total)
    throw InvariantError("topic totals disagree with doc-topic or topic-word counts");
}

Model init_assignments(std::shared_ptr<const Corpus> corpus, const Hyperparams& hp) {
  if (hp.topics < 1) throw InputError("LDA needs K >= 1 topics");
  hp.validate();
  if (!corpus || corpus->docs.empty()) throw InputError("LDA corpus is empty");
  for (const auto& d : corpus->docs)
    for (TokenId w : d)
      if (w < 0 || w >= corpus->vocab_size) throw InputError("token id outside the vocabulary");

  Model m;
  m.hp = hp;
  m.corpus = std::move(corpus);
  m.rng = Rng(hp.seed);
  m.assignments.resize(m.num_docs());
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    auto& z = m.assignments[d];
    z.resize(m.corpus->docs[d].size());
    for (auto& t : z) t = static_cast<int>(m.rng.below(static_cast<std::size_t>(hp.topics)));
  }
  m.recount();
  return m;
}

void gibbs_sweep(Model& m) {
  const int k_count = m.hp.topics;
  const double alpha = m.hp.alpha;
  const double beta = m.hp.beta;
  const double v_beta = m.vocab_size() * beta;
  std::vector<double> cdf(static_cast<std::size_t>(k_count));

  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    const auto& words = m.corpus->docs[d];
    auto& z = m.assignments[d];
    auto doc_row = m.doc_topic.row(static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n < words.size(); ++n) {
      const TokenId w = words[n];
      const int old = z[n];
      --doc_row(old);
      --m.topic_word(old, w);
      --m.topic_total(old);

      const int* word_col = m.topic_word.col(w).data();
      double total = 0;
      for (int k = 0; k < k_count; ++k) {
        total += (doc_row(k) + alpha) * (word_col[k] + beta) / (m.topic_total(k) + v_beta);
        cdf[static_cast<std::size_t>(k)] = total;
      }
      const double u = m.rng.uniform() * total;
      int k_new = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (k_new >= k_count) k_new = k_count - 1;

      z[n] = k_new;
      ++doc_row(k_new);
      ++m.topic_word(k_new, w);
      ++m.topic_total(k_new);
    }
  }
  ++m.sweeps;
}

double log_likelihood(const Model& m) {
  const int k_count = m.hp.topics;
  const int v = m.vocab_size();
  const double alpha = m.hp.alpha;
  const double beta = m.hp.beta;

  // log p(w | z): Dirichlet-multinomial per topic. Zero cells contribute 0.
  const double lg_beta = std::lgamma(beta);
  double ll = k_count * std::lgamma(v * beta);
  for (int k = 0; k < k_count; ++k) {
    for (int w = 0; w < v; ++w) {
      const int c = m.topic_word(k, w);
      if (c > 0) ll += std::lgamma(c + beta) - lg_beta;
    }
    ll -= std::lgamma(m.topic_total(k) + v * beta);
  }

  // log p(z): Dirichlet-multinomial per document.
  const double lg_alpha = std::lgamma(alpha);
  const double lg_k_alpha = std::lgamma(k_count * alpha);
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    const auto len = static_cast<double>(m.corpus->docs[d].size());
    if (len == 0) continue;
    ll += lg_k_alpha - std::lgamma(len + k_count * alpha);
    for (int k = 0; k < k_count; ++k) {
      const int c = m.doc_topic(static_cast<Eigen::Index>(d), k);
      if (c > 0) ll += std::lgamma(c + alpha) - lg_alpha;
    }
  }
  return ll;
}

TrainResult train(std::shared_ptr<const Corpus> corpus, const Hyperparams& hp) {
  hp.validate();
  TrainResult result{init_assignments(std::move(corpus), hp), {}, {}, {}, 0};
  Model& m = result.model;
  result.trace.push_back({0, log_likelihood(m)});
  if (hp.average_samples) {
    result.phi_mean = Eigen::MatrixXd::Zero(hp.topics, m.vocab_size());
    result.theta_mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.num_docs()), hp.topics);
  }
  for (int it = 1; it <= hp.iterations; ++it) {
    gibbs_sweep(m);
    if (it % hp.loglik_every == 0) result.trace.push_back({it, log_likelihood(m)});
    if (hp.average_samples && it > hp.burn_in && (it - hp.burn_in) % hp.loglik_every == 0) {
      result.phi_mean += estimate_phi(m);
      result.theta_mean += estimate_theta(m);
      ++result.averaged_samples;
    }
  }
  if (hp.average_samples) {
    if (result.averaged_samples == 0) {
      result.phi_mean = estimate_phi(m);
      result.theta_mean = estimate_theta(m);
      result.averaged_samples = 1;
    } else {
      result.phi_mean /= result.averaged_samples;
      result.theta_mean /= result.averaged_samples;
    }
  }
  return result;
}

Eigen::MatrixXd estimate_phi(const Model& m) {
  const double beta = m.hp.beta;
  const double v_beta = m.vocab_size() * beta;
  Eigen::MatrixXd phi = (m.topic_word.cast<double>().array() + beta).matrix();
  for (int k = 0; k < m.hp.topics; ++k) phi.row(k) /= (m.topic_total(k) + v_beta);
  return phi;
}

Eigen::MatrixXd estimate_theta(const Model& m) {
  const double alpha = m.hp.alpha;
  const double k_alpha = m.hp.topics * alpha;
  Eigen::MatrixXd theta = (m.doc_topic.cast<double>().array() + alpha).matrix();
  for (Eigen::Index d = 0; d < theta.rows(); ++d)
    theta.row(d) /= (static_cast<double>(m.corpus->docs[static_cast<std::size_t>(d)].size()) + k_alpha);
  return theta;
}

std::vector<TopicSummary> rank_topics(const Model& m, int top_n_words) {
  const double total = static_cast<double>(m.total_tokens());
  const int v = m.vocab_size();
  const auto top_n = static_cast<std::size_t>(std::clamp(top_n_words, 0, v));
  std::vector<TopicSummary> out;
  out.reserve(static_cast<std::size_t>(m.hp.topics));
  std::vector<TokenId> order(static_cast<std::size_t>(v));
  for (int k = 0; k < m.hp.topics; ++k) {
    TopicSummary s;
    s.topic = k;
    s.proportion_pct = total > 0 ? 100.0 * m.topic_total(k) / total : 0.0;
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_n), order.end(),
                      [&](TokenId a, TokenId b) {
                        const int ca = m.topic_word(k, a), cb = m.topic_word(k, b);
                        return ca != cb ? ca > cb : a < b;
                      });
    for (std::size_t i = 0; i < top_n; ++i) {
      const TokenId w = order[i];
      s.top_words.push_back({w, total > 0 ? 100.0 * m.topic_word(k, w) / total : 0.0});
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [&](const TopicSummary& a, const TopicSummary& b) {
    const int ca = m.topic_total(a.topic), cb = m.topic_total(b.topic);
    return ca != cb ? ca > cb : a.topic < b.topic;
  });
  return out;
}

std::string topic_report_csv(const std::vector<TopicSummary>& ranked, const Vocabulary& vocab) {
  std::size_t width = 0;
  for (const auto& s : ranked) width = std::max(width, s.top_words.size());
  std::string out = "rank,topic_id,proportion_pct";
  for (std::size_t i = 1; i <= width; ++i)
    out += ",word_" + std::to_string(i) + ",weight_" + std::to_string(i);
  out += "\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& s = ranked[r];
    out += std::to_string(r + 1) + "," + std::to_string(s.topic) + "," + format_fixed(s.proportion_pct, 6);
    for (std::size_t i = 0; i < width; ++i) {
      if (i < s.top_words.size()) {
        out += "," + vocab.token(s.top_words[i].word) + "," + format_fixed(s.top_words[i].weight_pct, 6);
      } else {
        out += ",,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string word_cloud_json(const std::vector<TopicSummary>& ranked, const Vocabulary& vocab) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  for (const auto& s : ranked) {
    auto words = nlohmann::ordered_json::array();
    for (const auto& w : s.top_words)
      words.push_back({{"word", vocab.token(w.word)}, {"weight_pct", w.weight_pct}});
    root[std::to_string(s.topic)] = std::move(words);
  }
  return root.dump(1) + "\n";
}

std::string serialize_state(const Model& m) {
  std::string out = std::to_string(m.hp.topics) + " " + std::to_string(m.vocab_size()) + " " +
                    std::to_string(m.num_docs()) + " " + format_double(m.hp.alpha) + " " +
                    format_double(m.hp.beta) + " " + std::to_string(m.hp.seed) + " " +
                    std::to_string(m.sweeps) + "\n";
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    out += d < m.corpus->ids.size() ? m.corpus->ids[d] : std::to_string(d);
    out.push_back('\t');
    const auto& z = m.assignments[d];
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (n) out.push_back(' ');
      out += std::to_string(z[n]);
    }
    out.push_back('\n');
  }
  return out;
}

Model parse_state(std::string_view text, std::shared_ptr<const Corpus> corpus) {
  auto lines = split(text, '\n');
  if (lines.empty()) throw InputError("empty LDA state");
  Model m;
  std::size_t v = 0, docs = 0;
  {
    std::istringstream ss{std::string(lines[0])};
    if (!(ss >> m.hp.topics >> v >> docs >> m.hp.alpha >> m.hp.beta >> m.hp.seed >> m.sweeps))
      throw InputError("malformed LDA state header");
  }
  if (!corpus || v != static_cast<std::size_t>(corpus->vocab_size) || docs != corpus->docs.size())
    throw InputError("LDA state does not match the corpus");
  m.hp.iterations = m.sweeps;
  m.hp.burn_in = 0;
  m.corpus = std::move(corpus);
  m.rng = Rng(m.hp.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(m.sweeps + 1)));
  std::size_t d = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (d >= docs) throw InputError("too many documents in LDA state");
    const auto tab = lines[i].find('\t');
    if (tab == std::string_view::npos) throw InputError("malformed LDA state line");
    std::vector<int> z;
    std::istringstream ss{std::string(lines[i].substr(tab + 1))};
    for (int t; ss >> t;) {
      if (t < 0 || t >= m.hp.topics) throw InputError("topic id out of range in LDA state");
      z.push_back(t);
    }
    if (z.size() != m.corpus->docs[d].size()) throw InputError("LDA state length mismatch at doc " + std::to_string(d));
    m.assignments.push_back(std::move(z));
    ++d;
  }
  if (d != docs) throw InputError("LDA state has too few documents");
  m.recount();
  return m;
}

}  // namespace topicsent::lda
