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

#ifndef TOPICSENT_BASELINES_HPP_
#define TOPICSENT_BASELINES_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

#include "topicsent/corpus.hpp"
#include "topicsent/evaluation.hpp"

namespace topicsent::baselines {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// One document's tf-idf weights with its cached L2 norm.
struct FeatureVector {
  Eigen::SparseVector<double> weights;
  double norm = 0;
};

struct FeatureMatrix {
  SparseRows rows;        // documents x features, L2-normalized rows
  Eigen::VectorXd norms;  // norm of each row (1, or 0 for empty documents)

  std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
  FeatureVector row(std::size_t i) const;
};

// tf-idf unigrams with smoothed idf = ln((1 + M) / (1 + df)) + 1, fitted on
// the training documents.
class TfidfVectorizer {
 public:
  static TfidfVectorizer fit(const std::vector<std::vector<std::string>>& docs, int min_df = 5,
                             std::size_t max_features = 50000);
  FeatureMatrix transform(const std::vector<std::vector<std::string>>& docs) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  const Eigen::VectorXd& idf() const { return idf_; }

 private:
  Vocabulary vocab_;
  Eigen::VectorXd idf_;
};

// fit + transform on the same documents.
FeatureMatrix featurize(const std::vector<std::vector<std::string>>& docs, int min_df = 1,
                        std::size_t max_features = 50000);

class TextClassifier {
 public:
  virtual ~TextClassifier() = default;
  virtual std::string name() const = 0;
  virtual int predict(const FeatureMatrix& x, std::size_t row) const = 0;
  std::vector<int> predict_all(const FeatureMatrix& x) const;
};

// Multinomial naive Bayes with additive smoothing.
class NaiveBayes : public TextClassifier {
 public:
  static NaiveBayes train(const FeatureMatrix& x, const std::vector<int>& labels, double smoothing = 1.0);
  std::string name() const override { return "naive_bayes"; }
  int predict(const FeatureMatrix& x, std::size_t row) const override;
  // Normalized class posterior over all label slots (0 for unseen classes).
  Eigen::VectorXd posterior(const FeatureMatrix& x, std::size_t row) const;

 private:
  std::vector<int> classes_;
  Eigen::VectorXd log_prior_;
  Eigen::MatrixXd log_likelihood_;  // classes x features
  int slots_ = 0;
};

struct LogisticOptions {
  double l2 = 1e-4;
  double tolerance = 1e-6;
  int max_iterations = 500;
};

// Softmax regression fitted by full-batch gradient descent with a
// backtracking line search, so the objective never increases.
class LogisticRegression : public TextClassifier {
 public:
  static LogisticRegression train(const FeatureMatrix& x, const std::vector<int>& labels, const LogisticOptions& opt = {});
  std::string name() const override { return "logistic_regression"; }
  int predict(const FeatureMatrix& x, std::size_t row) const override;
  const std::vector<double>& loss_history() const { return loss_history_; }

 private:
  std::vector<int> classes_;
  Eigen::MatrixXd weight_;  // features x classes
  Eigen::RowVectorXd bias_;
  std::vector<double> loss_history_;
};

struct SvmOptions {
  double lambda = 1e-4;
  int epochs = 10;
  std::uint64_t seed = 1;
};

// One-vs-rest linear SVM, hinge loss, Pegasos SGD. The bias is a
// constant feature.
class LinearSvm : public TextClassifier {
 public:
  static LinearSvm train(const FeatureMatrix& x, const std::vector<int>& labels, const SvmOptions& opt = {});
  std::string name() const override { return "svm"; }
  int predict(const FeatureMatrix& x, std::size_t row) const override;
  // Mean over classes of the regularized hinge objective after each epoch.
  const std::vector<double>& objective_history() const { return objective_history_; }

 private:
  std::vector<int> classes_;
  Eigen::MatrixXd weight_;  // (features + 1) x classes; last row is the bias
  std::vector<double> objective_history_;
};

// k nearest neighbours under cosine distance; majority vote, ties go to the
// tied class whose member is nearest.
class Knn : public TextClassifier {
 public:
  static Knn train(const FeatureMatrix& x, const std::vector<int>& labels, int k = 5);
  std::string name() const override { return "knn"; }
  int predict(const FeatureMatrix& x, std::size_t row) const override;

 private:
  Eigen::SparseMatrix<double, Eigen::ColMajor> train_;
  std::vector<int> labels_;
  int k_ = 5;
};

struct MethodResult {
  std::string method;
  EvalReport report;
  double train_seconds = 0;
};

struct CompareOptions {
  int min_df = 5;
  std::size_t max_features = 50000;
  int knn_k = 5;
  std::uint64_t seed = 1;
};

// Trains SVM, naive Bayes, logistic regression and KNN on one split.
std::vector<MethodResult> compare_classical(const std::vector<std::vector<std::string>>& train_docs,
                                            const std::vector<int>& train_labels,
                                            const std::vector<std::vector<std::string>>& test_docs,
                                            const std::vector<int>& test_labels, const CompareOptions& opt = {});

// CSV `method,accuracy,macro_f1,train_seconds`; timings are written as NA
// unless `with_timing` (and always for a negative time), so runs stay
// byte-reproducible.
std::string comparison_csv(const std::vector<MethodResult>& rows, bool with_timing);

}  // namespace topicsent::baselines

#endif  // TOPICSENT_BASELINES_HPP_
