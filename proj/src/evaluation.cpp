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

#include "topicsent/evaluation.hpp"

#include "json.hpp"
#include "topicsent/util.hpp"

namespace topicsent {
namespace {

int fold3(int label) { return label < 2 ? 0 : (label == 2 ? 1 : 2); }

}  // namespace

EvalReport evaluate_predictions(std::span<const int> gold, std::span<const int> predicted, int classes) {
  if (gold.empty()) throw InputError("cannot evaluate on an empty test set");
  if (gold.size() != predicted.size()) throw InputError("gold and predicted label counts differ");
  EvalReport r;
  r.count = gold.size();
  r.confusion = Eigen::MatrixXi::Zero(classes, classes);
  std::size_t correct = 0, correct3 = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= classes || predicted[i] < 0 || predicted[i] >= classes)
      throw InputError("label outside the class range");
    ++r.confusion(gold[i], predicted[i]);
    correct += gold[i] == predicted[i];
    if (classes == 5) correct3 += fold3(gold[i]) == fold3(predicted[i]);
  }
  const auto n = static_cast<double>(r.count);
  r.accuracy = static_cast<double>(correct) / n;
  r.accuracy_3class = classes == 5 ? static_cast<double>(correct3) / n : r.accuracy;
  r.gold_counts = r.confusion.rowwise().sum();
  const Eigen::VectorXi pred_counts = r.confusion.colwise().sum().transpose();
  r.precision = Eigen::VectorXd::Zero(classes);
  r.recall = Eigen::VectorXd::Zero(classes);
  r.f1 = Eigen::VectorXd::Zero(classes);
  int present = 0;
  double f1_sum = 0;
  for (int c = 0; c < classes; ++c) {
    const double tp = r.confusion(c, c);
    if (pred_counts(c) > 0) r.precision(c) = tp / pred_counts(c);
    if (r.gold_counts(c) > 0) r.recall(c) = tp / r.gold_counts(c);
    if (r.precision(c) + r.recall(c) > 0)
      r.f1(c) = 2 * r.precision(c) * r.recall(c) / (r.precision(c) + r.recall(c));
    if (r.gold_counts(c) > 0 || pred_counts(c) > 0) {
      ++present;
      f1_sum += r.f1(c);
    }
  }
  r.macro_f1 = present ? f1_sum / present : 0.0;
  return r;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["count"] = count;
  j["accuracy"] = accuracy;
  j["accuracy_3class"] = accuracy_3class;
  j["macro_f1"] = macro_f1;
  auto vec = [](const auto& v) {
    auto a = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  j["precision"] = vec(precision);
  j["recall"] = vec(recall);
  j["f1"] = vec(f1);
  j["gold_counts"] = vec(gold_counts);
  auto conf = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < confusion.rows(); ++r) conf.push_back(vec(confusion.row(r)));
  j["confusion"] = std::move(conf);
  return j.dump(1) + "\n";
}

}  // namespace topicsent
