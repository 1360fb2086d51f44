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

#ifndef TOPICSENT_EVALUATION_HPP_
#define TOPICSENT_EVALUATION_HPP_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace topicsent {

struct EvalReport {
  std::size_t count = 0;
  double accuracy = 0;
  // Accuracy after folding very_negative/negative and positive/very_positive.
  double accuracy_3class = 0;
  double macro_f1 = 0;
  Eigen::MatrixXi confusion;  // rows gold, columns predicted
  Eigen::VectorXd precision, recall, f1;
  Eigen::VectorXi gold_counts;

  std::string to_json() const;
};

// Throws InputError when the inputs are empty or of different lengths.
// Macro F1 averages over classes present in gold or predictions.
EvalReport evaluate_predictions(std::span<const int> gold, std::span<const int> predicted, int classes = 5);

}  // namespace topicsent

#endif  // TOPICSENT_EVALUATION_HPP_
