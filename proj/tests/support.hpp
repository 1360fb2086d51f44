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

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls into the code under test except to
// read model state.
#ifndef TOPICSENT_TESTS_SUPPORT_HPP_
#define TOPICSENT_TESTS_SUPPORT_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "topicsent/lda.hpp"
#include "topicsent/lstm.hpp"

namespace support {

inline std::filesystem::path data_dir() { return TOPICSENT_TEST_DATA; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("topicsent_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// ---- LDA exact posterior by enumeration ---------------------------------

// log p(w, z) for the collapsed model, written out term by term.
inline double lda_log_joint(const std::vector<std::vector<int>>& docs, const std::vector<std::vector<int>>& z, int k,
                            int v, double alpha, double beta) {
  double lp = 0;
  std::vector<std::vector<int>> nkw(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(v), 0));
  std::vector<int> nk(static_cast<std::size_t>(k), 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<int> ndk(static_cast<std::size_t>(k), 0);
    for (std::size_t n = 0; n < docs[d].size(); ++n) {
      ++ndk[static_cast<std::size_t>(z[d][n])];
      ++nkw[static_cast<std::size_t>(z[d][n])][static_cast<std::size_t>(docs[d][n])];
      ++nk[static_cast<std::size_t>(z[d][n])];
    }
    lp += std::lgamma(k * alpha) - std::lgamma(static_cast<double>(docs[d].size()) + k * alpha);
    for (int t = 0; t < k; ++t) lp += std::lgamma(ndk[static_cast<std::size_t>(t)] + alpha) - std::lgamma(alpha);
  }
  for (int t = 0; t < k; ++t) {
    lp += std::lgamma(v * beta) - std::lgamma(nk[static_cast<std::size_t>(t)] + v * beta);
    for (int w = 0; w < v; ++w) lp += std::lgamma(nkw[static_cast<std::size_t>(t)][static_cast<std::size_t>(w)] + beta) - std::lgamma(beta);
  }
  return lp;
}

// Flattens z into a base-K state index, first token most significant.
inline std::size_t state_index(const std::vector<std::vector<int>>& z, int k) {
  std::size_t s = 0;
  for (const auto& doc : z)
    for (int t : doc) s = s * static_cast<std::size_t>(k) + static_cast<std::size_t>(t);
  return s;
}

// Normalized posterior over every joint assignment, indexed by state_index.
inline std::vector<double> lda_exact_posterior(const std::vector<std::vector<int>>& docs, int k, int v, double alpha,
                                               double beta) {
  std::size_t tokens = 0;
  for (const auto& d : docs) tokens += d.size();
  std::size_t states = 1;
  for (std::size_t i = 0; i < tokens; ++i) states *= static_cast<std::size_t>(k);
  std::vector<double> logp(states);
  std::vector<std::vector<int>> z(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) z[d].resize(docs[d].size());
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    for (std::size_t d = docs.size(); d-- > 0;)
      for (std::size_t n = docs[d].size(); n-- > 0;) {
        z[d][n] = static_cast<int>(rest % static_cast<std::size_t>(k));
        rest /= static_cast<std::size_t>(k);
      }
    logp[s] = lda_log_joint(docs, z, k, v, alpha, beta);
  }
  const double max = *std::max_element(logp.begin(), logp.end());
  double total = 0;
  for (double& l : logp) total += (l = std::exp(l - max));
  for (double& l : logp) l /= total;
  return logp;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

// ---- planted topics --------------------------------------------------------

struct PlantedCorpus {
  Eigen::MatrixXd phi;  // K x V
  std::vector<std::vector<topicsent::TokenId>> docs;
};

inline std::vector<double> dirichlet(std::mt19937_64& gen, int n, double a) {
  std::gamma_distribution<double> g(a, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  double s = 0;
  for (double& x : out) s += (x = g(gen) + 1e-300);
  for (double& x : out) x /= s;
  return out;
}

inline PlantedCorpus planted_corpus(int k, int v, int docs, int len, double alpha, double topic_concentration,
                                    std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PlantedCorpus c;
  c.phi.resize(k, v);
  for (int t = 0; t < k; ++t) {
    const auto row = dirichlet(gen, v, topic_concentration);
    for (int w = 0; w < v; ++w) c.phi(t, w) = row[static_cast<std::size_t>(w)];
  }
  std::vector<std::discrete_distribution<int>> pick_word;
  for (int t = 0; t < k; ++t) {
    std::vector<double> row(c.phi.row(t).begin(), c.phi.row(t).end());
    pick_word.emplace_back(row.begin(), row.end());
  }
  for (int d = 0; d < docs; ++d) {
    const auto theta = dirichlet(gen, k, alpha);
    std::discrete_distribution<int> pick_topic(theta.begin(), theta.end());
    std::vector<topicsent::TokenId> doc;
    for (int n = 0; n < len; ++n) doc.push_back(pick_word[static_cast<std::size_t>(pick_topic(gen))](gen));
    c.docs.push_back(std::move(doc));
  }
  return c;
}

// Greedy one-to-one matching on cosine similarity; returns the mean cosine
// over matched pairs.
inline double greedy_matched_cosine(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  const Eigen::Index k = truth.rows();
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < estimate.rows(); ++b)
      pairs.emplace_back(truth.row(a).dot(estimate.row(b)) / (truth.row(a).norm() * estimate.row(b).norm()), a, b);
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
  std::vector<bool> used_a(static_cast<std::size_t>(k)), used_b(static_cast<std::size_t>(estimate.rows()));
  double sum = 0;
  int matched = 0;
  for (const auto& [cos, a, b] : pairs) {
    if (used_a[static_cast<std::size_t>(a)] || used_b[static_cast<std::size_t>(b)]) continue;
    used_a[static_cast<std::size_t>(a)] = used_b[static_cast<std::size_t>(b)] = true;
    sum += cos;
    ++matched;
  }
  return matched ? sum / matched : 0.0;
}

// ---- LSTM finite differences ---------------------------------------------

struct GradCheck {
  double max_rel_error = 0;
  std::string worst_tensor;
  std::map<std::string, double> per_tensor;
};

inline double rel_error(double a, double n) { return std::abs(a - n) / std::max(std::abs(a) + std::abs(n), 1e-6); }

// Compares analytic gradients of the summed loss over `batch` with central
// differences of step h, for every dense tensor and every touched embedding
// row when the model trains embeddings.
inline GradCheck gradient_check(topicsent::lstm::Classifier<double> m,
                                const std::vector<std::pair<std::vector<topicsent::TokenId>, int>>& batch,
                                double h = 1e-5) {
  using namespace topicsent::lstm;
  auto total_loss = [&](const Classifier<double>& model) {
    double l = 0;
    for (const auto& [tokens, gold] : batch) l += loss(forward(tokens, model).probs, gold);
    return l;
  };
  auto grad = Gradients<double>::zeros_like(m);
  for (const auto& [tokens, gold] : batch) backward(m, forward(tokens, m), gold, grad);

  GradCheck out;
  auto consider = [&](const std::string& name, double* param, double analytic) {
    const double saved = *param;
    *param = saved + h;
    const double up = total_loss(m);
    *param = saved - h;
    const double down = total_loss(m);
    *param = saved;
    const double err = rel_error(analytic, (up - down) / (2 * h));
    auto& slot = out.per_tensor[name];
    slot = std::max(slot, err);
    if (err >= out.max_rel_error) {
      out.max_rel_error = err;
      out.worst_tensor = name;
    }
  };
  for_each_tensor(m, grad, [&](const std::string& name, double* p, double* g, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) consider(name, p + i, g[i]);
  });
  if (m.train_embeddings)
    for (const auto& [row, g] : grad.embedding)
      for (Eigen::Index j = 0; j < g.size(); ++j) consider("embedding", &m.embedding(row, j), g(j));
  return out;
}

// Random small model with every parameter drawn from U(-scale, scale).
inline topicsent::lstm::Classifier<double> random_classifier(int vocab, int dim, int h1, int h2, std::uint64_t seed,
                                                             double scale = 0.5) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  auto fill = [&](auto& mat) {
    for (Eigen::Index i = 0; i < mat.size(); ++i) mat.data()[i] = u(gen);
  };
  Eigen::MatrixXd emb(vocab + 2, dim);
  fill(emb);
  emb.row(vocab + 1).setZero();
  auto m = topicsent::lstm::Classifier<double>::zeros(std::move(emb), h1, h2);
  for (auto* layer : {&m.layer1, &m.layer2})
    for (auto* g : {&layer->forget, &layer->input, &layer->output, &layer->candidate}) {
      fill(g->recurrent);
      fill(g->input);
      fill(g->bias);
    }
  fill(m.head.weight);
  fill(m.head.bias);
  return m;
}

}  // namespace support

#endif  // TOPICSENT_TESTS_SUPPORT_HPP_
