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

#ifndef TOPICSENT_LSTM_TRAIN_HPP_
#define TOPICSENT_LSTM_TRAIN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "topicsent/evaluation.hpp"
#include "topicsent/lstm.hpp"

namespace topicsent::lstm {

using Model = Classifier<double>;

struct TrainConfig {
  int hidden1 = 64;
  int hidden2 = 64;
  int batch_size = 64;
  int epochs = 10;
  double learning_rate = 1e-3;
  int max_len = 100;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;  // global gradient norm; <= 0 disables
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  bool fine_tune_embeddings = false;
  bool class_weights = false;  // inverse-frequency loss weights
  int threads = 1;

  void validate() const;
};

struct Example {
  std::vector<TokenId> tokens;
  int label = 0;
};

// U(-1/sqrt(H), 1/sqrt(H)) weights, zero biases except forget = 1.
Model init_model(Matrix<double> embedding, const TrainConfig& config);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double train_accuracy = 0;     // running, over the epoch's batches
  double validation_accuracy = 0;  // NaN without a validation set
};

struct TrainResult {
  Model model;  // best validation accuracy, earliest on ties
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  std::vector<std::string> warnings;

  // CSV `epoch,train_loss,train_acc,val_acc`.
  std::string log_csv() const;
};

// Mini-batch Adam on mean cross-entropy with global-norm clipping.
// Deterministic for a fixed seed and thread count.
TrainResult train(Model initial, const std::vector<Example>& train_set, const std::vector<Example>& validation,
                  const TrainConfig& config);

// Mean loss and gradients over a batch, split over `threads` workers and
// reduced in a fixed order. Adds the number of correct pre-update
// predictions to *correct when given.
double batch_gradients(const Model& m, const std::vector<const Example*>& batch, const std::vector<double>& class_weight,
                       int threads, Gradients<double>& grad, std::size_t* correct = nullptr);

std::vector<int> predict(const Model& m, const std::vector<Example>& data, int threads = 1);
double accuracy(const Model& m, const std::vector<Example>& data, int threads = 1);
EvalReport evaluate(const Model& m, const std::vector<Example>& test_set, int threads = 1);

// Self-describing text model file: header with dims, config and vocabulary,
// then row-major tensor blocks (layer1 f,i,o,c; layer2 f,i,o,c; head;
// embedding).
std::string serialize_model(const Model& m, const TrainConfig& config, const std::vector<std::string>& vocab);
struct LoadedModel {
  Model model;
  TrainConfig config;
  std::vector<std::string> vocab;
};
LoadedModel parse_model(std::string_view text);

}  // namespace topicsent::lstm

#endif  // TOPICSENT_LSTM_TRAIN_HPP_
