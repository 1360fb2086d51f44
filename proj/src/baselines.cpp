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

#include "topicsent/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "topicsent/util.hpp"

namespace topicsent::baselines {
namespace {

std::vector<int> present_classes(const std::vector<int>& labels) {
  std::set<int> s(labels.begin(), labels.end());
  if (s.size() < 2) throw InputError("classifier training needs at least two classes");
  if (*s.begin() < 0) throw InputError("negative class label");
  return {s.begin(), s.end()};
}

void check_rows(const FeatureMatrix& x, const std::vector<int>& labels) {
  if (x.size() != labels.size()) throw InputError("feature rows and labels differ in length");
  if (x.size() == 0) throw InputError("classifier training set is empty");
}

template <typename Row>
double sparse_dot(const SparseRows& x, std::size_t row, const Row& dense) {
  double s = 0;
  for (SparseRows::InnerIterator it(x, static_cast<Eigen::Index>(row)); it; ++it) s += it.value() * dense(it.col());
  return s;
}

int argmax_mapped(const Eigen::VectorXd& scores, const std::vector<int>& classes) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k)
    if (scores(k) > scores(best)) best = k;
  return classes[static_cast<std::size_t>(best)];
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

FeatureVector FeatureMatrix::row(std::size_t i) const {
  FeatureVector v;
  v.weights = rows.row(static_cast<Eigen::Index>(i)).transpose();
  v.norm = norms(static_cast<Eigen::Index>(i));
  return v;
}

TfidfVectorizer TfidfVectorizer::fit(const std::vector<std::vector<std::string>>& docs, int min_df,
                                     std::size_t max_features) {
  TfidfVectorizer t;
  t.vocab_ = Vocabulary::build(docs, min_df, max_features);
  const auto m = static_cast<double>(docs.size());
  t.idf_.resize(static_cast<Eigen::Index>(t.vocab_.size()));
  for (std::size_t i = 0; i < t.vocab_.size(); ++i) {
    const auto df = static_cast<double>(t.vocab_.document_frequency(static_cast<TokenId>(i)));
    t.idf_(static_cast<Eigen::Index>(i)) = std::log((1 + m) / (1 + df)) + 1;
  }
  return t;
}

FeatureMatrix TfidfVectorizer::transform(const std::vector<std::vector<std::string>>& docs) const {
  std::vector<Eigen::Triplet<double>> triplets;
  FeatureMatrix out;
  out.norms = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(docs.size()));
  std::map<TokenId, double> tf;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    tf.clear();
    for (const auto& tok : docs[d])
      if (auto id = vocab_.find(tok)) tf[*id] += 1;
    double sq = 0;
    for (auto& [id, w] : tf) {
      w *= idf_(id);
      sq += w * w;
    }
    if (sq == 0) continue;
    const double norm = std::sqrt(sq);
    for (const auto& [id, w] : tf) triplets.emplace_back(static_cast<int>(d), id, w / norm);
    out.norms(static_cast<Eigen::Index>(d)) = 1.0;
  }
  out.rows.resize(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(vocab_.size()));
  out.rows.setFromTriplets(triplets.begin(), triplets.end());
  out.rows.makeCompressed();
  return out;
}

FeatureMatrix featurize(const std::vector<std::vector<std::string>>& docs, int min_df, std::size_t max_features) {
  return TfidfVectorizer::fit(docs, min_df, max_features).transform(docs);
}

std::vector<int> TextClassifier::predict_all(const FeatureMatrix& x) const {
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = predict(x, i);
  return out;
}

NaiveBayes NaiveBayes::train(const FeatureMatrix& x, const std::vector<int>& labels, double smoothing) {
  check_rows(x, labels);
  NaiveBayes nb;
  nb.classes_ = present_classes(labels);
  nb.slots_ = nb.classes_.back() + 1;
  const auto c = static_cast<Eigen::Index>(nb.classes_.size());
  const Eigen::Index v = x.rows.cols();
  std::vector<int> slot(static_cast<std::size_t>(nb.slots_), -1);
  for (Eigen::Index k = 0; k < c; ++k) slot[static_cast<std::size_t>(nb.classes_[static_cast<std::size_t>(k)])] = static_cast<int>(k);

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(c, v);
  Eigen::VectorXd docs = Eigen::VectorXd::Zero(c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int k = slot[static_cast<std::size_t>(labels[i])];
    docs(k) += 1;
    for (SparseRows::InnerIterator it(x.rows, static_cast<Eigen::Index>(i)); it; ++it) counts(k, it.col()) += it.value();
  }
  nb.log_prior_ = (docs / static_cast<double>(x.size())).array().log();
  nb.log_likelihood_.resize(c, v);
  for (Eigen::Index k = 0; k < c; ++k) {
    const double denom = counts.row(k).sum() + smoothing * static_cast<double>(v);
    nb.log_likelihood_.row(k) = ((counts.row(k).array() + smoothing) / denom).log();
  }
  return nb;
}

Eigen::VectorXd NaiveBayes::posterior(const FeatureMatrix& x, std::size_t row) const {
  Eigen::VectorXd joint = log_prior_;
  for (Eigen::Index k = 0; k < joint.size(); ++k) joint(k) += sparse_dot(x.rows, row, log_likelihood_.row(k));
  const double max = joint.maxCoeff();
  Eigen::VectorXd p = (joint.array() - max).exp();
  p /= p.sum();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(slots_);
  for (std::size_t k = 0; k < classes_.size(); ++k) out(classes_[k]) = p(static_cast<Eigen::Index>(k));
  return out;
}

int NaiveBayes::predict(const FeatureMatrix& x, std::size_t row) const {
  Eigen::VectorXd joint = log_prior_;
  for (Eigen::Index k = 0; k < joint.size(); ++k) joint(k) += sparse_dot(x.rows, row, log_likelihood_.row(k));
  return argmax_mapped(joint, classes_);
}

LogisticRegression LogisticRegression::train(const FeatureMatrix& x, const std::vector<int>& labels,
                                             const LogisticOptions& opt) {
  check_rows(x, labels);
  LogisticRegression lr;
  lr.classes_ = present_classes(labels);
  const auto c = static_cast<Eigen::Index>(lr.classes_.size());
  const Eigen::Index v = x.rows.cols();
  const auto n = static_cast<double>(x.size());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()), c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto k = std::lower_bound(lr.classes_.begin(), lr.classes_.end(), labels[i]) - lr.classes_.begin();
    y(static_cast<Eigen::Index>(i), k) = 1;
  }

  // Mean cross-entropy + (l2 / 2) ||W||^2; fills `probs` with row softmaxes.
  auto objective = [&](const Eigen::MatrixXd& w, const Eigen::RowVectorXd& b, Eigen::MatrixXd& probs) {
    probs = x.rows * w;
    probs.rowwise() += b;
    double ce = 0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      const double max = probs.row(i).maxCoeff();
      probs.row(i) = (probs.row(i).array() - max).exp();
      const double z = probs.row(i).sum();
      probs.row(i) /= z;
      for (Eigen::Index k = 0; k < c; ++k)
        if (y(i, k) > 0) ce -= std::log(std::max(probs(i, k), std::numeric_limits<double>::min()));
    }
    return ce / n + 0.5 * opt.l2 * w.squaredNorm();
  };

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(v, c);
  Eigen::RowVectorXd b = Eigen::RowVectorXd::Zero(c);
  Eigen::MatrixXd probs;
  double loss = objective(w, b, probs);
  lr.loss_history_.push_back(loss);
  double step = 1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd residual = (probs - y) / n;
    const Eigen::MatrixXd grad_w = Eigen::MatrixXd(x.rows.transpose() * residual) + opt.l2 * w;
    const Eigen::RowVectorXd grad_b = residual.colwise().sum();
    const double grad_sq = grad_w.squaredNorm() + grad_b.squaredNorm();
    if (std::sqrt(grad_sq) < opt.tolerance) break;

    step *= 2;
    Eigen::MatrixXd trial_probs;
    double trial = 0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
      trial = objective(w - step * grad_w, b - step * grad_b, trial_probs);
      if (trial <= loss - 0.5 * step * grad_sq) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    w -= step * grad_w;
    b -= step * grad_b;
    probs.swap(trial_probs);
    const double decrease = loss - trial;
    loss = trial;
    lr.loss_history_.push_back(loss);
    if (decrease < opt.tolerance) break;
  }
  lr.weight_ = std::move(w);
  lr.bias_ = std::move(b);
  return lr;
}

int LogisticRegression::predict(const FeatureMatrix& x, std::size_t row) const {
  Eigen::VectorXd scores = bias_.transpose();
  for (SparseRows::InnerIterator it(x.rows, static_cast<Eigen::Index>(row)); it; ++it)
    scores += it.value() * weight_.row(it.col()).transpose();
  return argmax_mapped(scores, classes_);
}

LinearSvm LinearSvm::train(const FeatureMatrix& x, const std::vector<int>& labels, const SvmOptions& opt) {
  check_rows(x, labels);
  if (!(opt.lambda > 0) || opt.epochs < 1) throw InputError("SVM needs lambda > 0 and epochs >= 1");
  LinearSvm svm;
  svm.classes_ = present_classes(labels);
  const auto c = static_cast<Eigen::Index>(svm.classes_.size());
  const Eigen::Index v = x.rows.cols();
  const std::size_t n = x.size();
  svm.weight_ = Eigen::MatrixXd::Zero(v + 1, c);

  // Pegasos keeps w = scale * direction so the shrink step is O(1).
  struct State {
    Eigen::VectorXd direction;
    double scale = 1;
    long step = 0;
  };
  std::vector<State> states(static_cast<std::size_t>(c), State{Eigen::VectorXd::Zero(v + 1), 1.0, 0});
  auto margin_raw = [&](const State& s, std::size_t i) {
    return s.scale * (sparse_dot(x.rows, i, s.direction) + s.direction(v));
  };

  Rng rng(opt.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (Eigen::Index k = 0; k < c; ++k) {
      State& s = states[static_cast<std::size_t>(k)];
      const int cls = svm.classes_[static_cast<std::size_t>(k)];
      for (std::size_t i : order) {
        const double y = labels[i] == cls ? 1.0 : -1.0;
        ++s.step;
        const double eta = 1.0 / (opt.lambda * static_cast<double>(s.step));
        const double shrink = 1.0 - 1.0 / static_cast<double>(s.step);
        const double margin = y * margin_raw(s, i);
        if (shrink <= 0) {
          s.direction.setZero();
          s.scale = 1;
        } else {
          s.scale *= shrink;
        }
        if (margin < 1) {
          const double delta = eta * y / s.scale;
          for (SparseRows::InnerIterator it(x.rows, static_cast<Eigen::Index>(i)); it; ++it)
            s.direction(it.col()) += delta * it.value();
          s.direction(v) += delta;
        }
        if (s.scale < 1e-9) {
          s.direction *= s.scale;
          s.scale = 1;
        }
      }
    }
    double objective = 0;
    for (Eigen::Index k = 0; k < c; ++k) {
      const State& s = states[static_cast<std::size_t>(k)];
      const int cls = svm.classes_[static_cast<std::size_t>(k)];
      double hinge = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = labels[i] == cls ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * margin_raw(s, i));
      }
      objective += 0.5 * opt.lambda * s.scale * s.scale * s.direction.squaredNorm() + hinge / static_cast<double>(n);
    }
    svm.objective_history_.push_back(objective / static_cast<double>(c));
  }
  for (Eigen::Index k = 0; k < c; ++k) {
    const State& s = states[static_cast<std::size_t>(k)];
    svm.weight_.col(k) = s.scale * s.direction;
  }
  return svm;
}

int LinearSvm::predict(const FeatureMatrix& x, std::size_t row) const {
  const Eigen::Index v = weight_.rows() - 1;
  Eigen::VectorXd scores = weight_.row(v).transpose();
  for (SparseRows::InnerIterator it(x.rows, static_cast<Eigen::Index>(row)); it; ++it)
    scores += it.value() * weight_.row(it.col()).transpose();
  return argmax_mapped(scores, classes_);
}

Knn Knn::train(const FeatureMatrix& x, const std::vector<int>& labels, int k) {
  check_rows(x, labels);
  present_classes(labels);
  if (k < 1) throw InputError("KNN needs k >= 1");
  Knn knn;
  knn.train_ = x.rows;
  knn.labels_ = labels;
  knn.k_ = k;
  return knn;
}

int Knn::predict(const FeatureMatrix& x, std::size_t row) const {
  const auto n = static_cast<std::size_t>(train_.rows());
  Eigen::VectorXd sims = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (SparseRows::InnerIterator q(x.rows, static_cast<Eigen::Index>(row)); q; ++q) {
    if (q.col() >= train_.cols()) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(train_, q.col()); it; ++it) sims(it.row()) += q.value() * it.value();
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Smallest cosine distance = largest similarity; ties by training order.
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), [&](std::size_t a, std::size_t b) {
    const double sa = sims(static_cast<Eigen::Index>(a)), sb = sims(static_cast<Eigen::Index>(b));
    return sa != sb ? sa > sb : a < b;
  });
  std::map<int, int> votes;
  int top = 0;
  for (std::size_t i = 0; i < k; ++i) top = std::max(top, ++votes[labels_[idx[i]]]);
  for (std::size_t i = 0; i < k; ++i)
    if (votes[labels_[idx[i]]] == top) return labels_[idx[i]];
  return labels_[idx[0]];
}

std::vector<MethodResult> compare_classical(const std::vector<std::vector<std::string>>& train_docs,
                                            const std::vector<int>& train_labels,
                                            const std::vector<std::vector<std::string>>& test_docs,
                                            const std::vector<int>& test_labels, const CompareOptions& opt) {
  const auto vectorizer = TfidfVectorizer::fit(train_docs, opt.min_df, opt.max_features);
  const FeatureMatrix xtr = vectorizer.transform(train_docs);
  const FeatureMatrix xte = vectorizer.transform(test_docs);
  std::vector<MethodResult> out;
  auto run = [&](auto&& trainer) {
    const auto start = std::chrono::steady_clock::now();
    auto model = trainer();
    const double seconds = elapsed_seconds(start);
    const auto pred = model.predict_all(xte);
    out.push_back({model.name(), evaluate_predictions(test_labels, pred), seconds});
  };
  run([&] { return LinearSvm::train(xtr, train_labels, SvmOptions{1e-4, 10, opt.seed}); });
  run([&] { return NaiveBayes::train(xtr, train_labels); });
  run([&] { return LogisticRegression::train(xtr, train_labels); });
  run([&] { return Knn::train(xtr, train_labels, opt.knn_k); });
  return out;
}

std::string comparison_csv(const std::vector<MethodResult>& rows, bool with_timing) {
  std::string out = "method,accuracy,macro_f1,train_seconds\n";
  for (const auto& r : rows)
    out += r.method + "," + format_fixed(r.report.accuracy, 6) + "," + format_fixed(r.report.macro_f1, 6) + "," +
           (with_timing && r.train_seconds >= 0 ? format_fixed(r.train_seconds, 3) : std::string("NA")) + "\n";
  return out;
}

}  // namespace topicsent::baselines
