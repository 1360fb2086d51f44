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

#include "topicsent/lstm_train.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace topicsent::lstm {
namespace {

void init_gate(Gate<double>& g, double scale, Rng& rng) {
  for (auto* m : {&g.recurrent, &g.input})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-scale, scale);
  g.bias.setZero();
}

void init_layer(LayerParams<double>& p, Rng& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.hidden()));
  for (Gate<double>* g : {&p.forget, &p.input, &p.output, &p.candidate}) init_gate(*g, scale, rng);
  p.forget.bias.setOnes();
}

// Adam moments for every dense tensor in for_each_tensor order plus the
// embedding matrix (updated lazily, row by row).
struct AdamState {
  std::vector<Eigen::VectorXd> m, v;
  Matrix<double> emb_m, emb_v;
  long step = 0;
};

double gradient_norm(Model& model, Gradients<double>& g) {
  double sq = 0;
  for_each_tensor(model, g, [&](const std::string&, double*, double* grad, Eigen::Index n) {
    sq += Eigen::Map<Eigen::VectorXd>(grad, n).squaredNorm();
  });
  for (const auto& [row, v] : g.embedding) sq += v.squaredNorm();
  return std::sqrt(sq);
}

void scale_gradients(Model& model, Gradients<double>& g, double s) {
  for_each_tensor(model, g, [&](const std::string&, double*, double* grad, Eigen::Index n) {
    Eigen::Map<Eigen::VectorXd>(grad, n) *= s;
  });
  for (auto& [row, v] : g.embedding) v *= s;
}

void adam_step(Model& model, Gradients<double>& g, AdamState& st, const TrainConfig& c) {
  ++st.step;
  const double b1 = c.adam_beta1, b2 = c.adam_beta2, eps = c.adam_epsilon;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
  const double lr = c.learning_rate;
  std::size_t idx = 0;
  for_each_tensor(model, g, [&](const std::string&, double* param, double* grad, Eigen::Index n) {
    if (st.m.size() <= idx) {
      st.m.push_back(Eigen::VectorXd::Zero(n));
      st.v.push_back(Eigen::VectorXd::Zero(n));
    }
    Eigen::Map<Eigen::VectorXd> p(param, n), gr(grad, n);
    auto& m = st.m[idx];
    auto& v = st.v[idx];
    m = b1 * m + (1 - b1) * gr;
    v = b2 * v + (1 - b2) * gr.cwiseProduct(gr);
    p.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
    ++idx;
  });
  if (!g.embedding.empty()) {
    if (st.emb_m.size() == 0) {
      st.emb_m.setZero(model.embedding.rows(), model.embedding.cols());
      st.emb_v.setZero(model.embedding.rows(), model.embedding.cols());
    }
    for (const auto& [row, gr] : g.embedding) {
      auto m = st.emb_m.row(row);
      auto v = st.emb_v.row(row);
      m = b1 * m + (1 - b1) * gr.transpose();
      v = b2 * v + (1 - b2) * gr.cwiseProduct(gr).transpose();
      model.embedding.row(row).array() -=
          lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
    }
  }
}

template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
  if (workers == 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t per = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * per, end = std::min(n, begin + per);
    pool.emplace_back([&, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden1 < 1 || hidden2 < 1 || batch_size < 1 || epochs < 0 || max_len < 1 || threads < 1)
    throw InputError("LSTM sizes, batch, max_len and threads must be positive");
  if (!(learning_rate >= 0)) throw InputError("learning rate must be >= 0");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1 && adam_epsilon > 0))
    throw InputError("invalid Adam settings");
}

Model init_model(Matrix<double> embedding, const TrainConfig& config) {
  config.validate();
  Model m = Model::zeros(std::move(embedding), config.hidden1, config.hidden2);
  m.train_embeddings = config.fine_tune_embeddings;
  Rng rng(config.seed ^ 0x5bd1e995ULL);
  init_layer(m.layer1, rng);
  init_layer(m.layer2, rng);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.hidden2));
  for (Eigen::Index i = 0; i < m.head.weight.size(); ++i) m.head.weight.data()[i] = rng.uniform(-scale, scale);
  m.head.bias.setZero();
  return m;
}

double batch_gradients(const Model& m, const std::vector<const Example*>& batch, const std::vector<double>& class_weight,
                       int threads, Gradients<double>& grad, std::size_t* correct) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), batch.size()));
  std::vector<Gradients<double>> partial(workers, Gradients<double>::zeros_like(m));
  std::vector<double> losses(workers, 0.0);
  std::vector<std::size_t> hits(workers, 0);
  const double inv = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  parallel_chunks(batch.size(), static_cast<int>(workers), [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Example& ex = *batch[i];
      const double cw = class_weight.empty() ? 1.0 : class_weight[static_cast<std::size_t>(ex.label)];
      const auto fwd = forward(ex.tokens, m);
      losses[w] += cw * loss(fwd.probs, ex.label);
      hits[w] += predict_class(fwd.probs) == ex.label;
      backward(m, fwd, ex.label, partial[w], cw * inv);
    }
  });
  grad = std::move(partial[0]);
  double total = losses[0];
  for (std::size_t w = 1; w < workers; ++w) {
    grad += partial[w];
    total += losses[w];
  }
  if (correct) *correct += std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return total * inv;
}

std::vector<int> predict(const Model& m, const std::vector<Example>& data, int threads) {
  std::vector<int> out(data.size());
  parallel_chunks(data.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = predict_class(forward(data[i].tokens, m).probs);
  });
  return out;
}

double accuracy(const Model& m, const std::vector<Example>& data, int threads) {
  if (data.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto pred = predict(m, data, threads);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) correct += pred[i] == data[i].label;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

EvalReport evaluate(const Model& m, const std::vector<Example>& test_set, int threads) {
  if (test_set.empty()) throw InputError("cannot evaluate on an empty test set");
  const auto pred = predict(m, test_set, threads);
  std::vector<int> gold;
  gold.reserve(test_set.size());
  for (const auto& e : test_set) gold.push_back(e.label);
  return evaluate_predictions(gold, pred, kNumClasses);
}

TrainResult train(Model initial, const std::vector<Example>& train_set, const std::vector<Example>& validation,
                  const TrainConfig& config) {
  config.validate();
  initial.check_shapes();
  initial.train_embeddings = config.fine_tune_embeddings;
  TrainResult result;
  result.model = initial;
  if (train_set.empty()) throw InputError("LSTM training set is empty");

  std::vector<std::size_t> class_count(kNumClasses, 0);
  for (const auto& e : train_set) {
    if (e.label < 0 || e.label >= kNumClasses) throw InputError("training label outside [0, 5)");
    ++class_count[static_cast<std::size_t>(e.label)];
  }
  std::size_t present = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (class_count[static_cast<std::size_t>(c)] == 0)
      result.warnings.push_back("class " + std::to_string(c) + " has no training examples");
    else
      ++present;
  }
  std::vector<double> class_weight;
  if (config.class_weights) {
    class_weight.assign(kNumClasses, 0.0);
    for (int c = 0; c < kNumClasses; ++c) {
      const auto n = class_count[static_cast<std::size_t>(c)];
      if (n) class_weight[static_cast<std::size_t>(c)] = static_cast<double>(train_set.size()) / static_cast<double>(present * n);
    }
  }

  // Sequences are truncated once up front; pads are skipped by forward().
  std::vector<Example> data = train_set;
  for (auto& e : data)
    if (e.tokens.size() > static_cast<std::size_t>(config.max_len)) e.tokens.resize(static_cast<std::size_t>(config.max_len));
  std::vector<Example> val = validation;
  for (auto& e : val)
    if (e.tokens.size() > static_cast<std::size_t>(config.max_len)) e.tokens.resize(static_cast<std::size_t>(config.max_len));

  Model model = std::move(initial);
  Rng rng(config.seed);
  AdamState adam;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  double best_val = -1;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<const Example*> batch;
      for (std::size_t i = start; i < end; ++i) batch.push_back(&data[order[i]]);
      Gradients<double> grad;
      const double batch_loss = batch_gradients(model, batch, class_weight, config.threads, grad, &correct);
      loss_sum += batch_loss * static_cast<double>(batch.size());
      if (config.clip_norm > 0) {
        const double norm = gradient_norm(model, grad);
        if (norm > config.clip_norm) scale_gradients(model, grad, config.clip_norm / norm);
      }
      adam_step(model, grad, adam, config);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(data.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    rec.validation_accuracy = accuracy(model, val, config.threads);
    result.history.push_back(rec);
    const double score = val.empty() ? static_cast<double>(epoch) : rec.validation_accuracy;
    if (score > best_val) {
      best_val = score;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  if (config.epochs == 0) result.model = model;
  return result;
}

std::string TrainResult::log_csv() const {
  std::string out = "epoch,train_loss,train_acc,val_acc\n";
  for (const auto& r : history)
    out += std::to_string(r.epoch) + "," + format_fixed(r.train_loss, 6) + "," + format_fixed(r.train_accuracy, 6) + "," +
           (std::isnan(r.validation_accuracy) ? std::string("nan") : format_fixed(r.validation_accuracy, 6)) + "\n";
  return out;
}

}  // namespace topicsent::lstm
